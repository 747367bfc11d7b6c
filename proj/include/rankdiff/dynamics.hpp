#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "rankdiff/drift_model.hpp"

namespace rankdiff {

struct ParticleState {
  Eigen::VectorXd positions;
  double time = 0.0;
};

struct SimulationPlan {
  double step = 1e-3;
  double horizon = 100.0;
  double burn_in = 10.0;     // defaults to 10% of the horizon when <= 0
  long long thinning = 0;    // steps between retained states; 0 = auto
  std::uint64_t seed = 1;
};

// Drift entry i is b_n(rank_i) where rank_i = #{j : X_j <= X_i}; ties are
// broken by index via a stable sort.
Eigen::VectorXd drift_vector(const DriftModel& model,
                             const Eigen::VectorXd& positions);

// One Euler step with the supplied standard normal vector.
void step_euler(const DriftModel& model, ParticleState& state, double h,
                const Eigen::VectorXd& gauss);
// Convenience overload drawing the normals from `rng`.
void step_euler(const DriftModel& model, ParticleState& state, double h,
                std::mt19937_64& rng);

// Orthogonal projection onto the zero-sum hyperplane (mean subtraction);
// idempotent.
void project_to_hyperplane(Eigen::VectorXd& z);

struct StationaryRun {
  Eigen::MatrixXd states;          // one retained state per row, on M_n
  std::vector<double> times;
  double ess = 0.0;                // effective sample size of z_1
  long long thinning = 1;
  SimulationPlan plan;
};

// Euler trajectory from the zero vector, projected each step; burn-in
// discarded, every `thinning`-th state retained (auto thinning keeps at
// most 1e5 states).
StationaryRun simulate_stationary(const DriftModel& model, long long n,
                                  const SimulationPlan& plan);

}  // namespace rankdiff
