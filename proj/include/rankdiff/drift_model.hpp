#pragma once

#include <string>
#include <utility>
#include <vector>

namespace rankdiff {

enum class DriftKind { Linear, PiecewiseLinear };

// One linear piece of b on [u0,u1].  The antiderivative B is quadratic on
// the piece: B(u) = B0 + b0*(u-u0) + slope*(u-u0)^2/2.  R1 is the exact
// integral of b from u1 to 1, accumulated from the right so that B can be
// evaluated without cancellation near u = 1.
struct DriftSegment {
  double u0, u1;
  double b0, b1;
  double slope;
  double B0;
  double R1;
};

// Piecewise-linear drift b on [0,1] together with its exact antiderivative
// B and the diffusion coefficient sigma.  Immutable after construction;
// all evaluations are pure.
class DriftModel {
 public:
  // b(u) = c (1/2 - u), the canonical equilibrium family.
  static DriftModel linear(double c, double sigma);
  // Continuous piecewise-linear b through the given (u, b) nodes; the node
  // abscissas must be strictly increasing and span exactly [0,1].
  static DriftModel piecewise(std::vector<std::pair<double, double>> nodes,
                              double sigma);

  DriftKind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  double sigma2() const { return sigma_ * sigma_; }

  double b(double u) const;
  double B(double u) const;

  double b_at_0() const { return segments_.front().b0; }
  double b_at_1() const { return segments_.back().b1; }
  double B_at_1() const { return B1_; }

  // b_n(k) = n * (B(k/n) - B((k-1)/n)), 1 <= k <= n.
  double b_n(long long n, long long k) const;

  // u / B(u) and (1-u) / B(u), evaluated from per-segment closed forms so
  // the removable 0/0 at the endpoints never appears.
  double u_over_B(double u) const;
  double one_minus_u_over_B(double u) const;

  const std::vector<DriftSegment>& segments() const { return segments_; }
  const DriftSegment& segment_at(double u) const;

  // Interior node abscissas (kink locations of b), useful as quadrature
  // break points.
  std::vector<double> interior_nodes() const;

  std::string describe() const;

 private:
  DriftModel() = default;
  void build(const std::vector<std::pair<double, double>>& nodes);

  DriftKind kind_ = DriftKind::Linear;
  double sigma_ = 1.0;
  double B1_ = 0.0;
  std::vector<DriftSegment> segments_;
};

struct ValidationCheck {
  std::string name;
  double measured;
  double tolerance;
  bool passed;
};

struct ValidationReport {
  bool passed = false;
  std::vector<ValidationCheck> checks;
  std::string message;
};

// Equilibrium checks: |B(1)| <= tol, b strictly decreasing (nodes plus a
// 1024-point midpoint grid), b(0) > 0 > b(1), and B > 0 on (0,1) via exact
// per-segment minimisation of the piecewise-quadratic B.
ValidationReport validate_assumption_E(const DriftModel& model,
                                       double tol = 1e-10);

struct InfimumRatios {
  double m_minus;  // inf over [0, 1-delta] of B(u)/u
  double m_plus;   // inf over [delta, 1] of B(u)/(1-u)
  double argmin_minus;
  double argmin_plus;
};

// Exact per-segment minimisation (quadratic critical points plus interval
// endpoints); the u -> 0 and u -> 1 limits are b(0) and -b(1).
InfimumRatios infimum_ratios(const DriftModel& model, double delta);

}  // namespace rankdiff
