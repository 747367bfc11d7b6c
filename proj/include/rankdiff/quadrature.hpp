#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rankdiff {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1,1].
// Nonnegative abscissas; even indices are Kronrod-only nodes.
namespace detail_gk15 {
inline constexpr double xgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double wgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};
}  // namespace detail_gk15

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

template <class F>
Panel gk15_panel(F&& f, double a, double b) {
  using namespace detail_gk15;
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = wgk[7] * fc;
  double gauss = wg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double x = h * xgk[j];
    const double fsum = f(c - x) + f(c + x);
    kronrod += wgk[j] * fsum;
    if (j % 2 == 1) gauss += wg[j / 2] * fsum;
  }
  kronrod *= h;
  gauss *= h;
  return Panel{a, b, kronrod, std::abs(kronrod - gauss)};
}

// Globally adaptive quadrature (worst-panel bisection).  `breaks` may list
// interior points where the integrand has kinks; panels never straddle them.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-12,
                 double abs_tol = 1e-15, std::size_t max_panels = 4000,
                 const std::vector<double>* breaks = nullptr) {
  if (!(a < b)) {
    if (a == b) return 0.0;
    throw std::invalid_argument("integrate: empty interval");
  }
  std::vector<Panel> panels;
  double lo = a;
  if (breaks) {
    for (double p : *breaks) {
      if (p > lo && p < b) {
        panels.push_back(gk15_panel(f, lo, p));
        lo = p;
      }
    }
  }
  panels.push_back(gk15_panel(f, lo, b));

  for (;;) {
    double value = 0.0, error = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      value += panels[i].value;
      error += panels[i].error;
      if (panels[i].error > panels[worst].error) worst = i;
    }
    if (error <= std::max(abs_tol, rel_tol * std::abs(value))) return value;
    if (panels.size() >= max_panels || panels[worst].error == 0.0)
      throw std::runtime_error("integrate: failed to converge");
    const Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b))
      throw std::runtime_error("integrate: interval too small");
    panels[worst] = gk15_panel(f, p.a, mid);
    panels.push_back(gk15_panel(f, mid, p.b));
  }
}

// Tanh-sinh quadrature on (0,1) for integrands with integrable endpoint
// singularities u^p (1-u)^r, p,r > -1.  The integrand is supplied in log
// form, logf(u, log u, log(1-u)), and every term is assembled as
// exp(logf + log weight) so that neither factor overflows on its own.
template <class LogF>
double integrate01_log_tanhsinh(LogF&& logf, double rel_tol = 1e-10,
                                int max_level = 12) {
  const double half_pi = 1.5707963267948966;
  // du/dt = (pi/4) cosh(t) sech^2((pi/2) sinh t)
  const double log_quarter_pi = std::log(0.5 * half_pi);
  auto term_at = [&](double t) -> double {
    const double g = half_pi * std::sinh(t);
    const double ag = std::abs(g);
    // log cosh(g), stable for large |g|
    const double log_cosh_g =
        ag + std::log1p(std::exp(-2.0 * ag)) - 0.6931471805599453;
    const double log_u = -std::log1p(std::exp(-2.0 * g));
    const double log_1mu = -std::log1p(std::exp(2.0 * g));
    if (log_u < -740.0 || log_1mu < -740.0) return 0.0;  // u collapsed to 0/1
    const double u = std::exp(log_u);
    const double log_w =
        log_quarter_pi + std::log(std::cosh(t)) - 2.0 * log_cosh_g;
    const double le = logf(u, log_u, log_1mu) + log_w;
    return le > -745.0 ? std::exp(le) : 0.0;
  };

  const double t_max = 6.5;
  double previous = std::numeric_limits<double>::quiet_NaN();
  for (int level = 2; level <= max_level; ++level) {
    const double h = std::ldexp(1.0, -level);
    double sum = term_at(0.0);
    for (double t = h; t <= t_max; t += h) sum += term_at(t) + term_at(-t);
    const double value = h * sum;
    if (level > 3 &&
        std::abs(value - previous) <=
            rel_tol * std::max(std::abs(value), 1e-300))
      return value;
    previous = value;
  }
  throw std::runtime_error("tanh-sinh quadrature: failed to converge");
}

}  // namespace rankdiff
