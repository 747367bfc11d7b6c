#include "rankdiff/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rankdiff {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
  for (const auto& item : obj.items())
    if (!allowed.count(item.key()))
      throw ConfigError("unknown key \"" + where + item.key() + "\"");
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + " must be a number");
  return j.get<double>();
}

long long as_integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + " must be an integer");
  return j.get<long long>();
}

std::vector<long long> as_ladder(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw ConfigError(where + " must be a nonempty array of integers");
  std::vector<long long> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(as_integer(j[i], where + "[" + std::to_string(i) + "]"));
  for (std::size_t i = 0; i + 1 < out.size(); ++i)
    if (!(out[i] < out[i + 1]))
      throw ConfigError(where + " must be strictly increasing");
  return out;
}

std::vector<std::pair<double, double>> as_pairs(const json& j,
                                                const std::string& where) {
  if (!j.is_array() || j.empty())
    throw ConfigError(where + " must be a nonempty array of [a,b] pairs");
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != 2)
      throw ConfigError(at + " must be a pair");
    out.emplace_back(as_number(j[i][0], at), as_number(j[i][1], at));
  }
  return out;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string to_hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

void parse_model(const json& j, ModelConfig& m) {
  check_keys(j, "model.", {"kind", "c", "nodes", "sigma2"});
  if (j.contains("kind")) {
    m.kind = j.at("kind").get<std::string>();
    if (m.kind != "linear" && m.kind != "piecewise")
      throw ConfigError("model.kind must be \"linear\" or \"piecewise\"");
  }
  if (j.contains("c")) m.c = as_number(j.at("c"), "model.c");
  if (j.contains("sigma2")) {
    m.sigma2 = as_number(j.at("sigma2"), "model.sigma2");
    if (!(m.sigma2 > 0.0)) throw ConfigError("model.sigma2 must be positive");
  }
  if (j.contains("nodes")) m.nodes = as_pairs(j.at("nodes"), "model.nodes");
  if (m.kind == "piecewise" && m.nodes.empty())
    throw ConfigError("model.kind=piecewise requires model.nodes");
}

}  // namespace

DriftModel ModelConfig::build() const {
  const double sigma = std::sqrt(sigma2);
  if (kind == "linear") return DriftModel::linear(c, sigma);
  return DriftModel::piecewise(nodes, sigma);
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.hash_hex = to_hex(fnv1a("default"));
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be an object");

  ExperimentConfig cfg;
  check_keys(j, "",
             {"model", "seed", "out", "laplace", "chaoticity", "sample",
              "simulate", "wasserstein"});

  if (j.contains("model")) parse_model(j.at("model"), cfg.model);
  if (j.contains("seed")) {
    const long long s = as_integer(j.at("seed"), "seed");
    if (s < 0) throw ConfigError("seed must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();

  if (j.contains("laplace")) {
    const json& b = j.at("laplace");
    check_keys(b, "laplace.", {"n_ladder", "grid"});
    if (b.contains("n_ladder"))
      cfg.laplace.n_ladder = as_ladder(b.at("n_ladder"), "laplace.n_ladder");
    if (b.contains("grid"))
      cfg.laplace.grid = as_pairs(b.at("grid"), "laplace.grid");
  }
  if (j.contains("chaoticity")) {
    const json& b = j.at("chaoticity");
    check_keys(b, "chaoticity.", {"n_ladder", "grid"});
    if (b.contains("n_ladder"))
      cfg.chaoticity.n_ladder =
          as_ladder(b.at("n_ladder"), "chaoticity.n_ladder");
    if (b.contains("grid"))
      cfg.chaoticity.grid = as_pairs(b.at("grid"), "chaoticity.grid");
  }
  if (j.contains("sample")) {
    const json& b = j.at("sample");
    check_keys(b, "sample.", {"law", "n", "count"});
    if (b.contains("law")) {
      cfg.sample.law = b.at("law").get<std::string>();
      if (cfg.sample.law != "finite" && cfg.sample.law != "nonlinear" &&
          cfg.sample.law != "both")
        throw ConfigError("sample.law must be finite|nonlinear|both");
    }
    if (b.contains("n")) cfg.sample.n = as_integer(b.at("n"), "sample.n");
    if (b.contains("count")) {
      const long long c = as_integer(b.at("count"), "sample.count");
      if (c <= 0) throw ConfigError("sample.count must be positive");
      cfg.sample.count = static_cast<std::size_t>(c);
    }
  }
  if (j.contains("simulate")) {
    const json& b = j.at("simulate");
    check_keys(b, "simulate.",
               {"n", "step", "horizon", "burn_in", "thinning", "t_grid",
                "ess_floor"});
    if (b.contains("n")) cfg.simulate.n = as_integer(b.at("n"), "simulate.n");
    if (b.contains("step"))
      cfg.simulate.step = as_number(b.at("step"), "simulate.step");
    if (b.contains("horizon"))
      cfg.simulate.horizon = as_number(b.at("horizon"), "simulate.horizon");
    if (b.contains("burn_in"))
      cfg.simulate.burn_in = as_number(b.at("burn_in"), "simulate.burn_in");
    if (b.contains("thinning"))
      cfg.simulate.thinning = as_integer(b.at("thinning"), "simulate.thinning");
    if (b.contains("t_grid")) {
      cfg.simulate.t_grid.clear();
      const json& g = b.at("t_grid");
      if (!g.is_array() || g.empty())
        throw ConfigError("simulate.t_grid must be a nonempty array");
      for (std::size_t i = 0; i < g.size(); ++i)
        cfg.simulate.t_grid.push_back(
            as_number(g[i], "simulate.t_grid[" + std::to_string(i) + "]"));
    }
    if (b.contains("ess_floor"))
      cfg.simulate.ess_floor = as_number(b.at("ess_floor"), "simulate.ess_floor");
  }
  if (j.contains("wasserstein")) {
    const json& b = j.at("wasserstein");
    check_keys(b, "wasserstein.",
               {"n_ladder", "q", "draws", "bootstrap", "pair_k2",
                "pair_draws"});
    if (b.contains("n_ladder"))
      cfg.wasserstein.n_ladder =
          as_ladder(b.at("n_ladder"), "wasserstein.n_ladder");
    if (b.contains("q")) {
      cfg.wasserstein.q.clear();
      const json& g = b.at("q");
      if (!g.is_array() || g.empty())
        throw ConfigError("wasserstein.q must be a nonempty array");
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double qv =
            as_number(g[i], "wasserstein.q[" + std::to_string(i) + "]");
        if (!(qv >= 1.0)) throw ConfigError("wasserstein.q entries need q >= 1");
        cfg.wasserstein.q.push_back(qv);
      }
    }
    if (b.contains("draws"))
      cfg.wasserstein.draws = static_cast<std::size_t>(
          as_integer(b.at("draws"), "wasserstein.draws"));
    if (b.contains("bootstrap"))
      cfg.wasserstein.bootstrap = static_cast<int>(
          as_integer(b.at("bootstrap"), "wasserstein.bootstrap"));
    if (b.contains("pair_k2")) {
      if (!b.at("pair_k2").is_boolean())
        throw ConfigError("wasserstein.pair_k2 must be a boolean");
      cfg.wasserstein.pair_k2 = b.at("pair_k2").get<bool>();
    }
    if (b.contains("pair_draws"))
      cfg.wasserstein.pair_draws = static_cast<std::size_t>(
          as_integer(b.at("pair_draws"), "wasserstein.pair_draws"));
  }

  cfg.hash_hex = to_hex(fnv1a(j.dump() + "#" + std::to_string(cfg.seed)));
  return cfg;
}

}  // namespace rankdiff
