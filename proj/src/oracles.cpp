#include "rankdiff/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rankdiff/quadrature.hpp"

namespace rankdiff {

namespace {

double integrand_n2(const FiniteLaw& law, double s, double t, double x) {
  Eigen::Vector2d z(x, -x);
  return std::exp(s * z(0) + t * z(1) +
                  law.log_density_unnormalized(z));
}

double integral_n2(const FiniteLaw& law, double s, double t, double R,
                   double rel_tol) {
  const std::vector<double> breaks{0.0};
  return integrate(
      [&](double x) { return integrand_n2(law, s, t, x); }, -R, R, rel_tol,
      0.0, 8000, &breaks);
}

double integral_n3(const FiniteLaw& law, double s, double t, double R,
                   double rel_tol) {
  auto inner = [&](double z1) {
    // kinks of the sorted density as z2 sweeps: z2 = z1, z2 = z3 and the
    // z1 = z3 crossing
    std::vector<double> breaks{z1, -0.5 * z1, -2.0 * z1};
    std::sort(breaks.begin(), breaks.end());
    auto f = [&](double z2) {
      Eigen::Vector3d z(z1, z2, -(z1 + z2));
      return std::exp(s * z(0) + t * z(1) + law.log_density_unnormalized(z));
    };
    return integrate(f, -R, R, 0.1 * rel_tol, 0.0, 8000, &breaks);
  };
  return integrate(inner, -R, R, rel_tol, 0.0, 8000);
}

}  // namespace

double laplace_by_quadrature(const FiniteLaw& law, double s, double t,
                             double rel_tol) {
  const long long n = law.n();
  if (n != 2 && n != 3)
    throw std::invalid_argument("quadrature oracle implemented for n=2,3");

  // expand the integration box until the value stabilises
  const double scale = 1.0 / law.gap_rates().minCoeff();
  double R = 40.0 * scale;
  double previous_ratio = std::numeric_limits<double>::quiet_NaN();
  for (int attempt = 0; attempt < 7; ++attempt) {
    const double num = (n == 2) ? integral_n2(law, s, t, R, rel_tol)
                                : integral_n3(law, s, t, R, rel_tol);
    const double den = (n == 2) ? integral_n2(law, 0.0, 0.0, R, rel_tol)
                                : integral_n3(law, 0.0, 0.0, R, rel_tol);
    const double ratio = num / den;
    if (attempt > 0 &&
        std::abs(ratio - previous_ratio) <= 0.5 * rel_tol * std::abs(ratio))
      return ratio;
    previous_ratio = ratio;
    R *= 2.0;
  }
  throw std::runtime_error(
      "quadrature oracle did not stabilise under domain growth");
}

}  // namespace rankdiff
