#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rankdiff/dynamics.hpp"
#include "rankdiff/finite_law.hpp"
#include "rankdiff/sample.hpp"
#include "rankdiff/stats.hpp"

using namespace rankdiff;

namespace {

const double kSigma = std::sqrt(2.0);

DriftModel demo() { return DriftModel::linear(2.0, kSigma); }

}  // namespace

TEST_CASE("rank-based drift assignment") {
  DriftModel m = demo();
  Eigen::VectorXd x(2);
  x << 0.0, 1.0;
  const Eigen::VectorXd d = drift_vector(m, x);
  CHECK(d(0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(d(1) == doctest::Approx(-0.5).epsilon(1e-14));

  // ties broken by index: equal positions get ranks 1..n in index order
  Eigen::VectorXd tie = Eigen::VectorXd::Zero(4);
  const Eigen::VectorXd dt = drift_vector(m, tie);
  for (int i = 0; i < 4; ++i)
    CHECK(dt(i) == doctest::Approx(m.b_n(4, i + 1)).epsilon(1e-14));

  std::mt19937_64 rng = make_stream(4, 0);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::VectorXd r(7);
    for (int i = 0; i < 7; ++i) r(i) = std::sin(11.0 * rep + i);
    CHECK(std::abs(drift_vector(m, r).sum()) <= 1e-13 * 7);
  }
}

TEST_CASE("deterministic Euler step") {
  DriftModel m = demo();
  ParticleState state;
  state.positions.resize(2);
  state.positions << 0.0, 1.0;
  const Eigen::VectorXd no_noise = Eigen::VectorXd::Zero(2);
  step_euler(m, state, 0.1, no_noise);
  CHECK(state.positions(0) == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(state.positions(1) == doctest::Approx(0.95).epsilon(1e-14));
  CHECK(state.time == doctest::Approx(0.1));

  // zero step leaves the state unchanged
  ParticleState frozen;
  frozen.positions.resize(2);
  frozen.positions << 0.3, -0.4;
  step_euler(m, frozen, 0.0, no_noise);
  CHECK(frozen.positions(0) == 0.3);
  CHECK(frozen.positions(1) == -0.4);
}

TEST_CASE("one-step mean displacement matches the drift") {
  DriftModel m = demo();
  const int reps = 10000;
  const double h = 0.1;
  std::mt19937_64 rng = make_stream(6, 0);
  Eigen::VectorXd disp0(reps), disp1(reps);
  for (int r = 0; r < reps; ++r) {
    ParticleState s;
    s.positions.resize(2);
    s.positions << 0.0, 1.0;
    step_euler(m, s, h, rng);
    disp0(r) = s.positions(0) - 0.0;
    disp1(r) = s.positions(1) - 1.0;
  }
  const MeanSe m0 = mean_and_se(disp0);
  const MeanSe m1 = mean_and_se(disp1);
  CHECK(std::abs(m0.mean - h * 0.5) <= 4.0 * m0.se);
  CHECK(std::abs(m1.mean + h * 0.5) <= 4.0 * m1.se);
}

TEST_CASE("projection onto the zero-sum hyperplane") {
  Eigen::VectorXd z(2);
  z << 1.0, 3.0;
  project_to_hyperplane(z);
  CHECK(z(0) == doctest::Approx(-1.0));
  CHECK(z(1) == doctest::Approx(1.0));
  project_to_hyperplane(z);  // idempotent
  CHECK(z(0) == doctest::Approx(-1.0));
  CHECK(z(1) == doctest::Approx(1.0));

  std::mt19937_64 rng = make_stream(8, 0);
  Eigen::VectorXd w(9);
  for (int i = 0; i < 9; ++i) w(i) = uniform_open01(rng) * 10.0 - 3.0;
  project_to_hyperplane(w);
  CHECK(std::abs(w.sum()) <= 1e-12 * 9);
}

TEST_CASE("projected dynamics ignore the center of mass") {
  DriftModel m = demo();
  std::mt19937_64 noise_a = make_stream(12, 0);
  std::mt19937_64 noise_b = make_stream(12, 0);  // identical noise stream
  ParticleState a, b;
  a.positions.resize(5);
  a.positions << 0.1, -0.4, 0.3, 0.0, 0.0;
  b.positions = a.positions.array() + 17.5;  // shifted along (1,...,1)
  for (int step = 0; step < 50; ++step) {
    step_euler(m, a, 1e-2, noise_a);
    step_euler(m, b, 1e-2, noise_b);
  }
  project_to_hyperplane(a.positions);
  project_to_hyperplane(b.positions);
  for (int i = 0; i < 5; ++i)
    CHECK(a.positions(i) == doctest::Approx(b.positions(i)).epsilon(1e-9));
}

TEST_CASE("exchangeability under simultaneous permutation") {
  DriftModel m = demo();
  const int n = 3, steps = 10;
  const int perm[3] = {2, 0, 1};
  // shared noise table, permuted consistently with the initial condition
  std::mt19937_64 rng = make_stream(14, 0);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd noise(steps, n);
  for (int s = 0; s < steps; ++s)
    for (int i = 0; i < n; ++i) noise(s, i) = g(rng);

  ParticleState x, y;
  x.positions.resize(n);
  x.positions << 0.4, -0.1, -0.3;
  y.positions.resize(n);
  for (int i = 0; i < n; ++i) y.positions(perm[i]) = x.positions(i);
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXd gx = noise.row(s).transpose();
    Eigen::VectorXd gy(n);
    for (int i = 0; i < n; ++i) gy(perm[i]) = gx(i);
    step_euler(m, x, 1e-2, gx);
    step_euler(m, y, 1e-2, gy);
  }
  for (int i = 0; i < n; ++i)
    CHECK(y.positions(perm[i]) == doctest::Approx(x.positions(i)).epsilon(1e-12));
}

TEST_CASE("seeded runs are bit-identical") {
  DriftModel m = demo();
  SimulationPlan plan;
  plan.step = 1e-2;
  plan.horizon = 20.0;
  plan.burn_in = 2.0;
  plan.seed = 77;
  const StationaryRun a = simulate_stationary(m, 4, plan);
  const StationaryRun b = simulate_stationary(m, 4, plan);
  REQUIRE(a.states.rows() == b.states.rows());
  CHECK((a.states - b.states).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("stationary run matches the closed-form transform at n=2") {
  DriftModel m = demo();
  SimulationPlan plan;
  plan.step = 1e-3;
  plan.horizon = 2000.0;
  plan.burn_in = 100.0;
  plan.seed = 5;
  const StationaryRun run = simulate_stationary(m, 2, plan);
  CHECK(run.ess > 50.0);
  Eigen::VectorXd series(run.states.rows());
  for (Eigen::Index r = 0; r < run.states.rows(); ++r)
    series(r) = (0.5 * run.states.row(r).transpose().array()).exp().mean();
  const MeanSe bm = batch_means(series);
  CHECK(std::abs(bm.mean - 4.0 / 3.0) <= 4.0 * bm.se);
}
