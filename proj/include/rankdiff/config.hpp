#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rankdiff/drift_model.hpp"

namespace rankdiff {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelConfig {
  std::string kind = "linear";
  double c = 2.0;
  std::vector<std::pair<double, double>> nodes;
  double sigma2 = 2.0;

  DriftModel build() const;
};

struct LaplaceBlock {
  std::vector<long long> n_ladder{2, 10, 100, 1000};
  std::vector<std::pair<double, double>> grid{{0.3, -0.2}};
};

struct SampleBlock {
  std::string law = "finite";  // finite | nonlinear | both
  long long n = 2;
  std::size_t count = 100000;
};

struct SimulateBlock {
  long long n = 50;
  double step = 1e-3;
  double horizon = 2000.0;
  double burn_in = 100.0;
  long long thinning = 0;
  std::vector<double> t_grid{-0.5, -0.25, 0.25, 0.5};
  double ess_floor = 100.0;
};

struct WassersteinBlock {
  std::vector<long long> n_ladder{2, 10, 100, 1000};
  std::vector<double> q{1.0, 2.0};
  std::size_t draws = 100000;
  int bootstrap = 30;
  bool pair_k2 = false;
  std::size_t pair_draws = 512;
};

struct ExperimentConfig {
  ModelConfig model;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  LaplaceBlock laplace;
  LaplaceBlock chaoticity{{10, 100, 1000, 10000}, {{0.3, -0.2}}};
  SampleBlock sample;
  SimulateBlock simulate;
  WassersteinBlock wasserstein;

  // stable 64-bit hash echoed into every emitted row
  std::string hash_hex;
};

// Parses the JSON config file; unknown keys anywhere are errors.  Throws
// ConfigError with the parse location or the offending key path.
ExperimentConfig load_config(const std::string& path);

// Defaults only (demo model), used when no --config is given.
ExperimentConfig default_config();

}  // namespace rankdiff
