#pragma once

#include <cstdint>
#include <vector>

#include "rankdiff/drift_model.hpp"
#include "rankdiff/sample.hpp"

namespace rankdiff {

// Open interval of Laplace parameters on which the transform of the
// mean-field stationary law is finite.
struct LaplaceDomainV {
  double lower;  // -2 b(0) / sigma^2  (< 0)
  double upper;  // -2 b(1) / sigma^2  (> 0)
  bool contains(double r) const { return r > lower && r < upper; }
};

struct QuadratureSettings {
  double rel_tol = 1e-11;
  int grid_size = 4096;    // Chebyshev points of the quantile cache
  int tanh_sinh_max_level = 12;
};

// Centered stationary law of the mean-field rank diffusion, represented by
// its quantile function phi.  Internally phi is split as
//
//   phi(u) = a0 log u + a1 log(1-u) + G(u),      a0 = sigma^2/(2 b(0)),
//                                                a1 = sigma^2/(2 b(1)),
//
// where G extends smoothly to [0,1]; G is cached on a Chebyshev grid with
// exact derivatives and interpolated by cubic Hermite cells, so the log tails
// are always represented exactly.  A `translation` shifts the whole family.
class NonlinearLaw {
 public:
  explicit NonlinearLaw(DriftModel model, double translation = 0.0,
                        QuadratureSettings settings = {});

  const DriftModel& model() const { return model_; }
  double translation() const { return translation_; }
  double tail_exponent_0() const { return a0_; }
  double tail_exponent_1() const { return a1_; }
  LaplaceDomainV laplace_domain() const;

  // Quantile function (cached path); u must lie strictly inside (0,1).
  double phi(double u) const;
  // Verification path: the two singular integrals evaluated by adaptive
  // quadrature, bypassing the cache entirely.
  double phi_direct(double u) const;
  // phi'(u) = sigma^2 / (2 B(u)), exact.
  double phi_derivative(double u) const;

  // Inverse of phi: the cumulative distribution function.
  double cdf(double x) const;
  // Density (2/sigma^2) B(cdf(x)).
  double density(double x) const;

  // Laplace transform, finite exactly on the open set V; throws
  // std::domain_error (naming the violated bound) otherwise.
  double laplace(double r) const;

  // Integral of phi over (0,1); equals `translation` up to quadrature error.
  double centering_integral() const;

  // Inverse-CDF draws.
  EmpiricalSample sample(std::uint64_t seed, std::size_t count) const;
  double draw(std::mt19937_64& rng) const;

 private:
  double remainder(double u) const;             // cached G(u)
  double remainder_derivative(double u) const;  // exact G'(u)
  void build_cache();

  DriftModel model_;
  double translation_;
  QuadratureSettings settings_;
  double a0_;
  double a1_;
  std::vector<double> grid_u_;
  std::vector<double> grid_G_;
  std::vector<double> grid_Gp_;
};

}  // namespace rankdiff
