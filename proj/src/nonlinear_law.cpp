#include "rankdiff/nonlinear_law.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rankdiff/quadrature.hpp"

namespace rankdiff {

namespace {

void require_open01(double u) {
  if (!(u > 0.0 && u < 1.0))
    throw std::domain_error("quantile argument must lie strictly in (0,1)");
}

}  // namespace

NonlinearLaw::NonlinearLaw(DriftModel model, double translation,
                           QuadratureSettings settings)
    : model_(std::move(model)), translation_(translation), settings_(settings) {
  const ValidationReport rep = validate_assumption_E(model_);
  if (!rep.passed)
    throw std::invalid_argument("drift model violates the equilibrium "
                                "assumption: " + rep.message);
  a0_ = model_.sigma2() / (2.0 * model_.b_at_0());
  a1_ = model_.sigma2() / (2.0 * model_.b_at_1());
  build_cache();
}

LaplaceDomainV NonlinearLaw::laplace_domain() const {
  return {-2.0 * model_.b_at_0() / model_.sigma2(),
          -2.0 * model_.b_at_1() / model_.sigma2()};
}

// G'(u) = sigma^2/(2B(u)) - a0/u + a1/(1-u).  Within the first and last
// drift segment the singular parts cancel analytically; the closed forms
// below carry out that cancellation so no catastrophic subtraction occurs.
double NonlinearLaw::remainder_derivative(double u) const {
  const double s2 = model_.sigma2();
  const auto& segs = model_.segments();
  const DriftSegment& first = segs.front();
  const DriftSegment& last = segs.back();

  if (u == 0.0) return -s2 * first.slope / (4.0 * first.b0 * first.b0) + a1_;
  if (u == 1.0) return -s2 * last.slope / (4.0 * last.b1 * last.b1) - a0_;

  if (segs.size() == 1) {
    // all three terms over the common denominator B u (1-u); the numerator
    // factors as u^2 times the bracket below (identically zero for the
    // linear family, whose law is exactly generalized-logistic)
    const double ratio = first.b0 + 0.5 * first.slope * u;  // B(u)/u
    const double bracket =
        ratio / first.b1 - first.slope * (1.0 - u) / (2.0 * first.b0);
    return 0.5 * s2 * bracket / (ratio * (1.0 - u));
  }
  if (u <= first.u1) {
    // sigma^2/(2B) - a0/u = -sigma^2 s0 / (4 b0 (b0 + s0 u/2))
    return -s2 * first.slope /
               (4.0 * first.b0 * (first.b0 + 0.5 * first.slope * u)) +
           a1_ / (1.0 - u);
  }
  if (u >= last.u0) {
    // sigma^2/(2B) + a1/(1-u) = sigma^2 (B1 + s e^2/2) / (2 B b(1) e), e = 1-u
    const double e = 1.0 - u;
    const double Bu = model_.B(u);
    return s2 * (model_.B_at_1() + 0.5 * last.slope * e * e) /
               (2.0 * Bu * last.b1 * e) -
           a0_ / u;
  }
  return 0.5 * s2 / model_.B(u) - a0_ / u + a1_ / (1.0 - u);
}

void NonlinearLaw::build_cache() {
  const int N = std::max(settings_.grid_size, 64);
  const double pi = 3.14159265358979323846;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(N) + 8);
  for (int j = 0; j <= N; ++j)
    grid.push_back(0.5 * (1.0 - std::cos(pi * j / N)));
  for (double v : model_.interior_nodes()) grid.push_back(v);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](double a, double b) { return b - a < 1e-14; }),
             grid.end());
  grid.front() = 0.0;
  grid.back() = 1.0;

  const double s2 = model_.sigma2();
  const auto& first = model_.segments().front();
  const std::vector<double> breaks = model_.interior_nodes();

  // G(0) = -int_0^1 [ (1-v) sigma^2 / (2B(v)) - a0/v ] dv; the bracket is
  // bounded, with a first-segment closed form removing the 0/0 at v = 0.
  auto W = [&](double v) -> double {
    if (v <= first.u1)
      return -s2 * (first.b0 + 0.5 * first.slope) /
             (2.0 * first.b0 * (first.b0 + 0.5 * first.slope * v));
    return 0.5 * s2 * model_.one_minus_u_over_B(v) - a0_ / v;
  };
  const double G0 =
      -integrate(W, 0.0, 1.0, settings_.rel_tol, 1e-14, 4000, &breaks);

  grid_u_ = grid;
  grid_G_.assign(grid.size(), 0.0);
  grid_Gp_.assign(grid.size(), 0.0);
  grid_G_[0] = G0;
  for (std::size_t j = 0; j < grid.size(); ++j)
    grid_Gp_[j] = remainder_derivative(grid[j]);
  for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
    const double inc =
        integrate([this](double v) { return remainder_derivative(v); },
                  grid[j], grid[j + 1], settings_.rel_tol, 1e-15, 200);
    grid_G_[j + 1] = grid_G_[j] + inc;
  }

  // cross-check the accumulated G(1) against the mirror-side representation
  const auto& lastseg = model_.segments().back();
  auto V1 = [&](double v) -> double {
    if (v >= lastseg.u0) {
      const double e = 1.0 - v;
      if (e == 0.0)
        return s2 * (lastseg.b1 - 0.5 * lastseg.slope) /
               (2.0 * lastseg.b1 * lastseg.b1);
      const double Bv = model_.B(v);
      return s2 * (model_.B_at_1() + e * e * (0.5 * lastseg.slope - lastseg.b1)) /
             (2.0 * Bv * lastseg.b1 * e);
    }
    return 0.5 * s2 * model_.u_over_B(v) + a1_ / (1.0 - v);
  };
  const double G1_direct =
      integrate(V1, 0.0, 1.0, settings_.rel_tol, 1e-14, 4000, &breaks);
  if (std::abs(grid_G_.back() - G1_direct) > 1e-8)
    throw std::runtime_error(
        "quantile cache construction failed its consistency check");
}

double NonlinearLaw::remainder(double u) const {
  const auto it = std::upper_bound(grid_u_.begin(), grid_u_.end(), u);
  std::size_t j = static_cast<std::size_t>(it - grid_u_.begin());
  if (j == 0) j = 1;
  if (j >= grid_u_.size()) j = grid_u_.size() - 1;
  const double ul = grid_u_[j - 1], ur = grid_u_[j];
  const double h = ur - ul;
  const double t = (u - ul) / h;
  const double t2 = t * t;
  const double omt = 1.0 - t;
  const double h00 = (1.0 + 2.0 * t) * omt * omt;
  const double h10 = t * omt * omt;
  const double h01 = t2 * (3.0 - 2.0 * t);
  const double h11 = t2 * (t - 1.0);
  return h00 * grid_G_[j - 1] + h10 * h * grid_Gp_[j - 1] +
         h01 * grid_G_[j] + h11 * h * grid_Gp_[j];
}

double NonlinearLaw::phi(double u) const {
  require_open01(u);
  return a0_ * std::log(u) + a1_ * std::log1p(-u) + remainder(u) +
         translation_;
}

double NonlinearLaw::phi_direct(double u) const {
  require_open01(u);
  const double s2 = model_.sigma2();
  const std::vector<double> breaks = model_.interior_nodes();
  const double left = integrate(
      [&](double v) { return 0.5 * s2 * model_.u_over_B(v); }, 0.0, u,
      settings_.rel_tol, 1e-14, 4000, &breaks);
  const double right = integrate(
      [&](double v) { return 0.5 * s2 * model_.one_minus_u_over_B(v); }, u,
      1.0, settings_.rel_tol, 1e-14, 4000, &breaks);
  return left - right + translation_;
}

double NonlinearLaw::phi_derivative(double u) const {
  require_open01(u);
  return 0.5 * model_.sigma2() / model_.B(u);
}

double NonlinearLaw::cdf(double x) const {
  const double target = x;
  // bracket guards derived from the log tails, then safeguarded Newton
  const double x0 = x - translation_;
  double lo = std::exp((x0 - 1.0) / a0_);
  double hi = 1.0 - std::exp((x0 + 1.0) / a1_);
  lo = std::clamp(lo, 1e-15, 1.0 - 1e-15);
  hi = std::clamp(hi, 1e-15, 1.0 - 1e-15);
  if (lo >= hi) {
    lo = 1e-15;
    hi = 1.0 - 1e-15;
  }
  for (int guard = 0; guard < 40 && phi(lo) > target && lo > 1e-290; ++guard)
    lo = lo * lo;
  for (int guard = 0; guard < 40 && phi(hi) < target && 1.0 - hi > 1e-16;
       ++guard) {
    const double e = 1.0 - hi;
    hi = 1.0 - std::max(e * e, 1e-16);
  }
  if (phi(lo) > target) return lo;  // beyond representable left tail
  if (phi(hi) < target) return hi;

  double u = std::clamp(0.5 * (lo + hi), lo, hi);
  const double tol = 1e-12 * (1.0 + std::abs(target));
  for (int it = 0; it < 200; ++it) {
    const double value = phi(u) - target;
    if (std::abs(value) <= tol) return u;
    if (value > 0.0)
      hi = u;
    else
      lo = u;
    const double step = value / phi_derivative(u);
    double next = u - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    u = next;
  }
  return u;
}

double NonlinearLaw::density(double x) const {
  const double u = cdf(x);
  return 2.0 / model_.sigma2() * model_.B(u);
}

double NonlinearLaw::laplace(double r) const {
  const LaplaceDomainV V = laplace_domain();
  if (!V.contains(r)) {
    std::ostringstream os;
    os << "Laplace parameter r=" << r << " outside V=(" << V.lower << ", "
       << V.upper << "): requires -2b(0)/sigma^2 < r < -2b(1)/sigma^2";
    throw std::domain_error(os.str());
  }
  if (r == 0.0) return 1.0;  // probability normalization
  const double shift = r * translation_;
  auto logf = [&](double u, double log_u, double log_1mu) {
    return r * (a0_ * log_u + a1_ * log_1mu + remainder(u)) + shift;
  };
  return integrate01_log_tanhsinh(logf, settings_.rel_tol,
                                  settings_.tanh_sinh_max_level);
}

double NonlinearLaw::centering_integral() const {
  // log parts integrate to -a0 - a1 exactly; the Hermite cells integrate
  // in closed form.
  double acc = -a0_ - a1_;
  for (std::size_t j = 0; j + 1 < grid_u_.size(); ++j) {
    const double h = grid_u_[j + 1] - grid_u_[j];
    acc += 0.5 * h * (grid_G_[j] + grid_G_[j + 1]) +
           h * h / 12.0 * (grid_Gp_[j] - grid_Gp_[j + 1]);
  }
  return acc + translation_;
}

double NonlinearLaw::draw(std::mt19937_64& rng) const {
  return phi(uniform_open01(rng));
}

EmpiricalSample NonlinearLaw::sample(std::uint64_t seed,
                                     std::size_t count) const {
  if (count == 0)
    throw std::invalid_argument("sample count must be positive");
  EmpiricalSample out;
  out.dimension = 1;
  out.draws.resize(static_cast<Eigen::Index>(count), 1);
  std::mt19937_64 rng = make_stream(seed, 0);
  for (std::size_t i = 0; i < count; ++i)
    out.draws(static_cast<Eigen::Index>(i), 0) = draw(rng);
  out.tag = {"nonlinear-inverse-cdf", seed, 0, count};
  return out;
}

}  // namespace rankdiff
