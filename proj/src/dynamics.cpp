#include "rankdiff/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rankdiff/sample.hpp"
#include "rankdiff/stats.hpp"

namespace rankdiff {

Eigen::VectorXd drift_vector(const DriftModel& model,
                             const Eigen::VectorXd& positions) {
  const long long n = positions.size();
  static thread_local std::vector<int> order;
  order.resize(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return positions(a) < positions(b);
  });
  Eigen::VectorXd drift(n);
  for (long long r = 0; r < n; ++r)
    drift(order[static_cast<std::size_t>(r)]) = model.b_n(n, r + 1);
  return drift;
}

void step_euler(const DriftModel& model, ParticleState& state, double h,
                const Eigen::VectorXd& gauss) {
  if (h < 0.0) throw std::invalid_argument("step size must be nonnegative");
  if (gauss.size() != state.positions.size())
    throw std::invalid_argument("noise dimension mismatch");
  state.positions += h * drift_vector(model, state.positions) +
                     model.sigma() * std::sqrt(h) * gauss;
  state.time += h;
}

void step_euler(const DriftModel& model, ParticleState& state, double h,
                std::mt19937_64& rng) {
  std::normal_distribution<double> gauss01(0.0, 1.0);
  Eigen::VectorXd g(state.positions.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = gauss01(rng);
  step_euler(model, state, h, g);
}

void project_to_hyperplane(Eigen::VectorXd& z) {
  z.array() -= z.mean();
}

StationaryRun simulate_stationary(const DriftModel& model, long long n,
                                  const SimulationPlan& plan) {
  if (n < 2) throw std::invalid_argument("simulation requires n >= 2");
  if (!(plan.step > 0.0 && plan.step <= plan.horizon))
    throw std::invalid_argument("need 0 < step <= horizon");
  double burn_in = plan.burn_in > 0.0 ? plan.burn_in : 0.1 * plan.horizon;
  if (!(burn_in < plan.horizon))
    throw std::invalid_argument("burn-in must be shorter than the horizon");

  const long long total_steps =
      static_cast<long long>(std::llround(plan.horizon / plan.step));
  const long long burn_steps =
      static_cast<long long>(std::llround(burn_in / plan.step));
  long long thinning = plan.thinning;
  if (thinning <= 0) {
    const long long post = std::max<long long>(1, total_steps - burn_steps);
    thinning = std::max<long long>(1, (post + 100000 - 1) / 100000);
  }
  const long long retained = (total_steps - burn_steps) / thinning;
  if (retained < 2)
    throw std::invalid_argument("plan retains fewer than two states");

  StationaryRun run;
  run.plan = plan;
  run.plan.burn_in = burn_in;
  run.thinning = thinning;
  run.states.resize(retained, n);
  run.times.reserve(static_cast<std::size_t>(retained));

  std::mt19937_64 rng = make_stream(plan.seed, 0);
  std::normal_distribution<double> gauss01(0.0, 1.0);
  ParticleState state{Eigen::VectorXd::Zero(n), 0.0};
  Eigen::VectorXd g(n);
  long long kept = 0;
  for (long long step = 1; step <= total_steps && kept < retained; ++step) {
    for (Eigen::Index i = 0; i < n; ++i) g(i) = gauss01(rng);
    step_euler(model, state, plan.step, g);
    project_to_hyperplane(state.positions);
    if (step > burn_steps && (step - burn_steps) % thinning == 0) {
      run.states.row(kept) = state.positions.transpose();
      run.times.push_back(state.time);
      ++kept;
    }
  }
  run.ess = effective_sample_size(run.states.col(0));
  return run;
}

}  // namespace rankdiff
