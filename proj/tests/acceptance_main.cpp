// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one pass/fail line per criterion.  Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rankdiff/drift_model.hpp"
#include "rankdiff/dynamics.hpp"
#include "rankdiff/finite_law.hpp"
#include "rankdiff/nonlinear_law.hpp"
#include "rankdiff/oracles.hpp"
#include "rankdiff/sample.hpp"
#include "rankdiff/stats.hpp"
#include "rankdiff/transport.hpp"

using namespace rankdiff;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass,
            const std::string& detail, double seconds) {
  std::printf("[%s] %02d %-38s %s (%.1fs)\n", pass ? "PASS" : "FAIL", id,
              name.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

template <class Fn>
void criterion(int id, const std::string& name, Fn fn) {
  const auto start = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    std::tie(pass, detail) = fn();
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  report(id, name, pass, detail, seconds);
}

const double kSigma = std::sqrt(2.0);

DriftModel demo() { return DriftModel::linear(2.0, kSigma); }

double logistic_laplace(double r) {
  return r == 0.0 ? 1.0
                  : std::numbers::pi * r / std::sin(std::numbers::pi * r);
}

std::string fmtd(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

int main() {
  NonlinearLaw law(demo());

  // 1. logistic closed forms
  criterion(1, "logistic closed forms", [&] {
    double worst_l = 0.0;
    for (double r : {-0.9, -0.5, -0.1, 0.1, 0.5, 0.9})
      worst_l = std::max(worst_l, std::abs(law.laplace(r) - logistic_laplace(r)) /
                                      logistic_laplace(r));
    std::mt19937_64 rng = make_stream(1, 0);
    double worst_phi = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double u = uniform_open01(rng);
      worst_phi =
          std::max(worst_phi, std::abs(law.phi(u) - std::log(u / (1.0 - u))));
    }
    const double centering = std::abs(law.centering_integral());
    const bool pass = worst_l <= 1e-8 && worst_phi <= 1e-9 &&
                      centering <= 1e-10;
    return std::pair(pass, "laplace rel " + fmtd(worst_l) + " (tol 1e-8), phi " +
                               fmtd(worst_phi) + " (tol 1e-9), centering " +
                               fmtd(centering) + " (tol 1e-10)");
  });

  // 2. n=2 exact identities plus the quadrature oracle
  criterion(2, "n=2 exact identities", [&] {
    FiniteLaw two(demo(), 2);
    const double e1 = std::abs(two.laplace_L1n(0.5) - 4.0 / 3.0);
    const double e2 = std::abs(two.laplace_L2n(0.3, -0.2) - 4.0 / 3.0);
    const double o1 = laplace_by_quadrature(two, 0.5, 0.0, 1e-9);
    const double o2 = laplace_by_quadrature(two, 0.3, -0.2, 1e-9);
    const double q1 = std::abs(two.laplace_L1n(0.5) - o1) / o1;
    const double q2 = std::abs(two.laplace_L2n(0.3, -0.2) - o2) / o2;
    const bool pass = e1 <= 1e-12 && e2 <= 1e-12 && q1 <= 1e-8 && q2 <= 1e-8;
    return std::pair(pass, "4/3 errs " + fmtd(e1) + ", " + fmtd(e2) +
                               " (tol 1e-12); oracle rel " + fmtd(q1) + ", " +
                               fmtd(q2) + " (tol 1e-8)");
  });

  // 3. n=3 quadrature oracle on a 5-point grid
  criterion(3, "n=3 quadrature oracle", [&] {
    FiniteLaw three(demo(), 3);
    const std::vector<std::pair<double, double>> grid{
        {0.3, -0.2}, {0.5, 0.2}, {-0.4, 0.1}, {0.2, 0.2}, {-0.3, -0.3}};
    double worst = 0.0;
    for (auto [s, t] : grid) {
      const double oracle = laplace_by_quadrature(three, s, t, 1e-8);
      worst = std::max(worst,
                       std::abs(three.laplace_L2n(s, t) - oracle) / oracle);
    }
    return std::pair(worst <= 1e-6,
                     "max rel err " + fmtd(worst) + " (tol 1e-6)");
  });

  // 4. product-limit convergence along the ladder
  criterion(4, "pair transform converges to product", [&] {
    const double limit = logistic_laplace(0.3) * logistic_laplace(-0.2);
    std::vector<double> errs;
    for (long long n : {10LL, 100LL, 1000LL, 10000LL})
      errs.push_back(
          std::abs(FiniteLaw(demo(), n).laplace_L2n(0.3, -0.2) - limit));
    bool decreasing = true;
    for (std::size_t i = 0; i + 1 < errs.size(); ++i)
      decreasing = decreasing && errs[i + 1] < errs[i];
    const bool pass = decreasing && errs.back() < 0.01;
    std::ostringstream os;
    os << "errors";
    for (double e : errs) os << " " << fmtd(e);
    os << " (strictly decreasing, last < 0.01)";
    return std::pair(pass, os.str());
  });

  // 5. exact sampler gate across sizes
  criterion(5, "exact sampler MC gate", [&] {
    const std::vector<std::pair<double, double>> grid{
        {0.5, 0.0}, {-0.5, 0.0}, {0.3, -0.2}, {0.25, 0.25}, {-0.3, 0.4}};
    double worst = 0.0;
    for (long long n : {2LL, 10LL, 100LL}) {
      FiniteLaw fin(demo(), n);
      for (const auto& c : fin.mc_laplace_check(1000 + n, 1000000, grid))
        worst = std::max(worst, c.zscore);
    }
    return std::pair(worst <= 3.0, "worst |z| " + fmtd(worst) + " (tol 3 SE)");
  });

  // 6. ergodic trajectory reproduces the closed-form transform
  criterion(6, "ergodicity cross-check (n=50)", [&] {
    FiniteLaw fin(demo(), 50);
    SimulationPlan plan;
    plan.step = 1e-3;
    plan.horizon = 2000.0;
    plan.burn_in = 100.0;
    plan.seed = 6;
    const StationaryRun run = simulate_stationary(demo(), 50, plan);
    SimulationPlan half = plan;
    half.step = 0.5e-3;
    const StationaryRun run_h = simulate_stationary(demo(), 50, half);
    bool pass = true;
    std::ostringstream os;
    for (double t : {-0.5, -0.25, 0.25, 0.5}) {
      auto mgf_series = [&](const StationaryRun& r) {
        Eigen::VectorXd series(r.states.rows());
        for (Eigen::Index i = 0; i < r.states.rows(); ++i)
          series(i) = (t * r.states.row(i).transpose().array()).exp().mean();
        return batch_means(series);
      };
      const MeanSe a = mgf_series(run);
      const MeanSe b = mgf_series(run_h);
      const double exact = fin.laplace_L1n(t);
      const double z = std::abs(a.mean - exact) / a.se;
      const double move = std::abs(a.mean - b.mean);
      const double bar = 4.0 * std::hypot(a.se, b.se);
      pass = pass && z <= 4.0 && move <= bar;
      os << " t=" << t << ": z=" << fmtd(z) << " move=" << fmtd(move)
         << " bar=" << fmtd(bar) << ";";
    }
    return std::pair(pass, os.str());
  });

  // 7. 1-marginal Wasserstein ladder
  criterion(7, "Wasserstein ladder (k=1)", [&] {
    const std::vector<long long> ladder{2, 10, 100, 1000};
    auto quantile = [&](double u) { return law.phi(u); };
    bool pass = true;
    std::ostringstream os;
    double w1_at_1000 = 1.0;
    for (double q : {1.0, 2.0}) {
      std::vector<double> dist, se;
      for (std::size_t li = 0; li < ladder.size(); ++li) {
        FiniteLaw fin(demo(), ladder[li]);
        std::mt19937_64 rng = make_stream(70 + ladder[li], 0);
        Eigen::VectorXd z, marg(100000);
        for (int i = 0; i < 100000; ++i) {
          fin.draw(rng, z);
          marg(i) = z(0);
        }
        dist.push_back(wasserstein_1d_vs_quantile(marg, quantile, q).distance);
        std::mt19937_64 boot = make_stream(71, li);
        se.push_back(bootstrap_band(
                         marg,
                         [&](const Eigen::VectorXd& re) {
                           return wasserstein_1d_vs_quantile(re, quantile, q)
                               .distance;
                         },
                         30, boot)
                         .se);
      }
      for (std::size_t i = 0; i + 1 < dist.size(); ++i)
        pass = pass && dist[i + 1] <= dist[i] + 2.0 * (se[i] + se[i + 1]);
      if (q == 1.0) w1_at_1000 = dist.back();
      os << " q=" << q << ":";
      for (double d : dist) os << " " << fmtd(d);
      os << ";";
    }
    pass = pass && w1_at_1000 < 0.05;
    os << " W1(n=1000)=" << fmtd(w1_at_1000) << " (tol 0.05)";
    return std::pair(pass, os.str());
  });

  // 8. transport solver correctness
  criterion(8, "assignment solver vs oracles", [&] {
    std::mt19937_64 rng = make_stream(88, 0);
    std::normal_distribution<double> g(0.0, 1.0);
    double worst_bf = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
      const int n = 2 + static_cast<int>(rng() % 6);
      const int k = 1 + static_cast<int>(rng() % 3);
      Eigen::MatrixXd X(n, k), Y(n, k);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) {
          X(i, j) = g(rng);
          Y(i, j) = g(rng);
        }
      for (double q : {1.0, 2.0})
        worst_bf = std::max(
            worst_bf, std::abs(wasserstein_assignment(X, Y, q).distance -
                               wasserstein_brute_force(X, Y, q).distance));
    }
    Eigen::MatrixXd X1(256, 1), Y1(256, 1);
    for (int i = 0; i < 256; ++i) {
      X1(i, 0) = g(rng);
      Y1(i, 0) = g(rng);
    }
    double worst_1d = 0.0;
    for (double q : {1.0, 2.0})
      worst_1d = std::max(
          worst_1d, std::abs(wasserstein_assignment(X1, Y1, q).distance -
                             wasserstein_1d(X1.col(0), Y1.col(0), q).distance));
    const bool pass = worst_bf <= 1e-10 && worst_1d <= 1e-12;
    return std::pair(pass, "vs brute force " + fmtd(worst_bf) +
                               " (tol 1e-10); 1-D reduction " + fmtd(worst_1d) +
                               " (tol 1e-12)");
  });

  // 9. uniform moment bound along the ladder
  criterion(9, "uniform tilted-moment bound", [&] {
    const double rho = 0.5;
    const double bound =
        1.05 * (logistic_laplace(-rho) + logistic_laplace(rho));
    double worst = 0.0;
    for (long long n : {10LL, 100LL, 1000LL, 10000LL}) {
      FiniteLaw fin(demo(), n);
      worst = std::max(worst, fin.laplace_L2n(-rho, 0.0) +
                                  fin.laplace_L2n(rho, 0.0));
    }
    return std::pair(worst <= bound, "max " + fmtd(worst) + " <= bound " +
                                         fmtd(bound));
  });

  // 10. feasibility plan certifies the denominator floor
  criterion(10, "feasibility plan floor", [&] {
    DriftModel m = demo();
    std::mt19937_64 rng = make_stream(10, 0);
    bool pass = true;
    double worst_gap = 1.0;
    long long max_n0 = 2;
    for (int rep = 0; rep < 100; ++rep) {
      double s, t;
      do {
        s = 2.0 * uniform_open01(rng) - 1.0;
        t = 2.0 * uniform_open01(rng) - 1.0;
      } while (!(s + t > -1.0 && s + t < 1.0));
      const EpsilonDeltaPlan plan = plan_epsilon_delta(m, s, t);
      max_n0 = std::max(max_n0, plan.n0);
      for (long long mult : {1LL, 2LL, 10LL}) {
        const FeasibilityCertificate cert = feasibility(m, mult * plan.n0, s, t);
        const double gap =
            cert.min_denominator - (1.0 - plan.alpha_bar - 1e-12);
        worst_gap = std::min(worst_gap, gap);
        pass = pass && cert.feasible && gap >= 0.0;
      }
    }
    return std::pair(pass, "worst floor gap " + fmtd(worst_gap) +
                               ", max n0 " + std::to_string(max_n0));
  });

  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures;
}
