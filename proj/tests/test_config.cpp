#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "rankdiff/config.hpp"

using namespace rankdiff;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& text) {
    path = std::string(std::tmpnam(nullptr)) + ".json";
    std::ofstream out(path);
    out << text;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("defaults: the demo model") {
  const ExperimentConfig cfg = default_config();
  CHECK(cfg.model.kind == "linear");
  CHECK(cfg.model.c == 2.0);
  CHECK(cfg.model.sigma2 == 2.0);
  DriftModel m = cfg.model.build();
  CHECK(m.b_at_0() == doctest::Approx(1.0));
  CHECK(m.sigma2() == doctest::Approx(2.0));
}

TEST_CASE("round trip of a full config") {
  TempFile f(R"({
    "model": {"kind": "piecewise",
              "nodes": [[0.0, 1.5], [0.25, 0.5], [1.0, -1.1666666666666667]],
              "sigma2": 1.5},
    "seed": 42,
    "out": "results",
    "laplace": {"n_ladder": [2, 4, 8], "grid": [[0.1, -0.1], [0.0, 0.0]]},
    "simulate": {"n": 10, "step": 0.001, "horizon": 50.0, "burn_in": 5.0,
                 "thinning": 2, "t_grid": [0.25], "ess_floor": 10},
    "wasserstein": {"n_ladder": [2, 10], "q": [1, 2], "draws": 1000,
                    "bootstrap": 10, "pair_k2": true, "pair_draws": 16}
  })");
  const ExperimentConfig cfg = load_config(f.path);
  CHECK(cfg.seed == 42);
  CHECK(cfg.out_dir == "results");
  CHECK(cfg.model.sigma2 == doctest::Approx(1.5));
  CHECK(cfg.laplace.n_ladder == std::vector<long long>{2, 4, 8});
  CHECK(cfg.laplace.grid.size() == 2);
  CHECK(cfg.simulate.thinning == 2);
  CHECK(cfg.wasserstein.pair_k2);
  CHECK(cfg.hash_hex.size() == 16);
  CHECK(cfg.model.build().b_at_0() == doctest::Approx(1.5));
}

TEST_CASE("unknown keys fail closed") {
  TempFile top(R"({"model": {"kind": "linear", "c": 2.0}, "typo": 1})");
  CHECK_THROWS_AS(load_config(top.path), ConfigError);
  TempFile nested(R"({"model": {"kind": "linear", "c": 2.0, "sigm2": 2.0}})");
  CHECK_THROWS_AS(load_config(nested.path), ConfigError);
  TempFile block(R"({"laplace": {"ladder": [2]}})");
  CHECK_THROWS_AS(load_config(block.path), ConfigError);
}

TEST_CASE("malformed inputs carry a diagnostic") {
  TempFile broken("{ not json ");
  try {
    load_config(broken.path);
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("parse error") != std::string::npos);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("semantic validation") {
  TempFile sigma(R"({"model": {"kind": "linear", "c": 2.0, "sigma2": -1.0}})");
  CHECK_THROWS_AS(load_config(sigma.path), ConfigError);
  TempFile ladder(R"({"laplace": {"n_ladder": [10, 5]}})");
  CHECK_THROWS_AS(load_config(ladder.path), ConfigError);
  TempFile count(R"({"sample": {"count": 0}})");
  CHECK_THROWS_AS(load_config(count.path), ConfigError);
  TempFile law(R"({"sample": {"law": "other"}})");
  CHECK_THROWS_AS(load_config(law.path), ConfigError);
  TempFile qv(R"({"wasserstein": {"q": [0.5]}})");
  CHECK_THROWS_AS(load_config(qv.path), ConfigError);
  TempFile pw(R"({"model": {"kind": "piecewise", "sigma2": 2.0}})");
  CHECK_THROWS_AS(load_config(pw.path), ConfigError);
}

TEST_CASE("hash is stable and sensitive") {
  TempFile a(R"({"seed": 1})");
  TempFile b(R"({"seed": 1})");
  TempFile c(R"({"seed": 2})");
  CHECK(load_config(a.path).hash_hex == load_config(b.path).hash_hex);
  CHECK(load_config(a.path).hash_hex != load_config(c.path).hash_hex);
}
