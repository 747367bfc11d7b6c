#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "rankdiff/drift_model.hpp"
#include "rankdiff/sample.hpp"

namespace rankdiff {

// The four denominator families 1 - f+-_k(...) whose positivity makes the
// closed-form Laplace products finite at a given (n, s, t).
struct DenominatorFamilies {
  double plus_st;   // 1 - f+_k(s+t)
  double mid_ts;    // 1 - f+_k(t) - f-_k(s)   (i < j branch)
  double mid_st;    // 1 - f+_k(s) - f-_k(t)   (i > j branch)
  double minus_st;  // 1 - f-_k(s+t)
};

struct FeasibilityCertificate {
  long long n = 0;
  double s = 0.0, t = 0.0;
  double min_plus_st, min_mid_ts, min_mid_st, min_minus_st;
  long long argmin_plus_st, argmin_mid_ts, argmin_mid_st, argmin_minus_st;
  double min_denominator = 0.0;
  bool feasible = false;
};

// Constructive counterpart of the existential threshold: epsilon is half the
// worst membership slack of {s, t, s+t} in the shrunk parameter window,
// delta the largest endpoint-linearisation radius verified exactly per
// drift segment, and n0 the smallest size for which all smallness
// conditions hold, so that every denominator family stays >= 1 - alpha_bar.
struct EpsilonDeltaPlan {
  double epsilon = 0.0;
  double delta = 0.0;
  double alpha_plus_s = 0.0, alpha_minus_s = 0.0;
  double alpha_plus_t = 0.0, alpha_minus_t = 0.0;
  double alpha_plus_st = 0.0, alpha_minus_st = 0.0;
  double alpha_bar = 0.0;
  double m_minus = 0.0, m_plus = 0.0;
  long long n0 = 2;
};

double f_plus(const DriftModel& model, long long n, long long k, double r);
double f_minus(const DriftModel& model, long long n, long long k, double r);

DenominatorFamilies denominator_families(const DriftModel& model, long long n,
                                         long long k, double s, double t);

FeasibilityCertificate feasibility(const DriftModel& model, long long n,
                                   double s, double t);

EpsilonDeltaPlan plan_epsilon_delta(const DriftModel& model, double s,
                                    double t);

// A point of the Monte Carlo-vs-closed-form comparison used to gate the
// exact sampler.
struct McLaplaceCheck {
  double s, t;
  double estimate;
  double std_error;
  double exact;
  double zscore;
};

// Stationary law of the projected n-particle system: rank weights b_n(k),
// gap rates 2 n B(k/n)/sigma^2, the unnormalised log-density on the zero-sum
// hyperplane, an exact gap-exponential sampler, and the closed-form Laplace
// transforms (log-space products; the one- and two-coordinate double sums
// collapse to O(n) prefix sums).
class FiniteLaw {
 public:
  FiniteLaw(DriftModel model, long long n);

  long long n() const { return n_; }
  const DriftModel& model() const { return model_; }
  const Eigen::VectorXd& rank_weights() const { return rank_weights_; }
  const Eigen::VectorXd& gap_rates() const { return gap_rates_; }

  double f_plus(long long k, double r) const;
  double f_minus(long long k, double r) const;

  // (2/sigma^2) sum_k b_n(k) z_(k); z must lie on the zero-sum hyperplane
  // (|sum z_i| <= 1e-9 n).
  double log_density_unnormalized(const Eigen::VectorXd& z) const;

  // One exact draw: independent exponential gaps between order statistics,
  // centered to the hyperplane, coordinates uniformly permuted.
  void draw(std::mt19937_64& rng, Eigen::VectorXd& out) const;
  EmpiricalSample sample(std::uint64_t seed, std::size_t count) const;

  double laplace_I(long long i, double t) const;
  double laplace_L1n(double t) const;
  double laplace_J(long long i, long long j, double s, double t) const;
  double laplace_L2n(double s, double t) const;

  // Monte Carlo E[exp(s z_1 + t z_2)] from the exact sampler against the
  // closed form, one entry per grid point.
  std::vector<McLaplaceCheck> mc_laplace_check(
      std::uint64_t seed, std::size_t count,
      const std::vector<std::pair<double, double>>& points) const;

 private:
  struct PrefixArrays;
  void build_prefixes(double s, double t, PrefixArrays& out) const;

  DriftModel model_;
  long long n_;
  Eigen::VectorXd rank_weights_;
  Eigen::VectorXd gap_rates_;
};

}  // namespace rankdiff
