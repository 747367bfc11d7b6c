#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rankdiff/quadrature.hpp"

using namespace rankdiff;

TEST_CASE("adaptive rule reproduces elementary integrals") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 40.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kinked integrands converge when the kink is declared") {
  const std::vector<double> breaks{0.5};
  const double v = integrate([](double x) { return std::abs(x - 0.5); }, 0.0,
                             1.0, 1e-13, 1e-15, 4000, &breaks);
  CHECK(v == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("tanh-sinh handles endpoint power singularities") {
  // int_0^1 u^{-0.9} du = 10
  auto logf = [](double, double log_u, double) { return -0.9 * log_u; };
  CHECK(integrate01_log_tanhsinh(logf, 1e-11) ==
        doctest::Approx(10.0).epsilon(1e-9));
  // Beta(0.5, 0.5) = pi
  auto beta = [](double, double lu, double l1mu) {
    return -0.5 * lu - 0.5 * l1mu;
  };
  CHECK(integrate01_log_tanhsinh(beta, 1e-11) ==
        doctest::Approx(M_PI).epsilon(1e-9));
  // plain smooth integrand: f(u) = 1 + u
  auto smooth = [](double u, double, double) { return std::log(1.0 + u); };
  CHECK(integrate01_log_tanhsinh(smooth, 1e-12) ==
        doctest::Approx(1.5).epsilon(1e-10));
}
