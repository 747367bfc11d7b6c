#include "rankdiff/drift_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rankdiff {

namespace {

void require_domain(double u) {
  if (!(u >= 0.0 && u <= 1.0))
    throw std::domain_error("drift evaluation outside [0,1]: u=" +
                            std::to_string(u));
}

}  // namespace

DriftModel DriftModel::linear(double c, double sigma) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw std::invalid_argument("linear drift requires c > 0");
  if (sigma == 0.0 || !std::isfinite(sigma))
    throw std::invalid_argument("diffusion coefficient must be nonzero");
  DriftModel m;
  m.kind_ = DriftKind::Linear;
  m.sigma_ = sigma;
  m.build({{0.0, 0.5 * c}, {1.0, -0.5 * c}});
  return m;
}

DriftModel DriftModel::piecewise(std::vector<std::pair<double, double>> nodes,
                                 double sigma) {
  if (sigma == 0.0 || !std::isfinite(sigma))
    throw std::invalid_argument("diffusion coefficient must be nonzero");
  if (nodes.size() < 2)
    throw std::invalid_argument("piecewise drift needs at least two nodes");
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    if (!(nodes[i].first < nodes[i + 1].first))
      throw std::invalid_argument("node abscissas must be strictly increasing");
  if (nodes.front().first != 0.0 || nodes.back().first != 1.0)
    throw std::invalid_argument("nodes must span exactly [0,1]");
  for (const auto& [u, bu] : nodes)
    if (!std::isfinite(u) || !std::isfinite(bu))
      throw std::invalid_argument("nodes must be finite");
  DriftModel m;
  m.kind_ = DriftKind::PiecewiseLinear;
  m.sigma_ = sigma;
  m.build(nodes);
  return m;
}

void DriftModel::build(const std::vector<std::pair<double, double>>& nodes) {
  segments_.clear();
  segments_.reserve(nodes.size() - 1);
  double Bacc = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    DriftSegment s;
    s.u0 = nodes[i].first;
    s.u1 = nodes[i + 1].first;
    s.b0 = nodes[i].second;
    s.b1 = nodes[i + 1].second;
    s.slope = (s.b1 - s.b0) / (s.u1 - s.u0);
    s.B0 = Bacc;
    s.R1 = 0.0;
    Bacc += 0.5 * (s.b0 + s.b1) * (s.u1 - s.u0);
    segments_.push_back(s);
  }
  B1_ = Bacc;
  double Racc = 0.0;  // integral of b from u1 of each segment to 1
  for (std::size_t i = segments_.size(); i-- > 0;) {
    segments_[i].R1 = Racc;
    Racc += 0.5 * (segments_[i].b0 + segments_[i].b1) *
            (segments_[i].u1 - segments_[i].u0);
  }
}

const DriftSegment& DriftModel::segment_at(double u) const {
  // first segment whose right endpoint is >= u
  std::size_t lo = 0, hi = segments_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (segments_[mid].u1 < u)
      lo = mid + 1;
    else
      hi = mid;
  }
  return segments_[lo];
}

double DriftModel::b(double u) const {
  require_domain(u);
  const DriftSegment& s = segment_at(u);
  return s.b0 + s.slope * (u - s.u0);
}

double DriftModel::B(double u) const {
  require_domain(u);
  const DriftSegment& s = segment_at(u);
  if (u <= 0.5) {
    const double d = u - s.u0;
    return s.B0 + d * (s.b0 + 0.5 * s.slope * d);
  }
  // accumulate from the right: B(u) = B(1) - int_u^1 b
  const double e = s.u1 - u;
  const double bu = s.b1 - s.slope * e;
  return B1_ - s.R1 - 0.5 * e * (bu + s.b1);
}

double DriftModel::b_n(long long n, long long k) const {
  if (n < 1) throw std::invalid_argument("b_n requires n >= 1");
  if (k < 1 || k > n)
    throw std::invalid_argument("b_n rank out of range: k=" +
                                std::to_string(k));
  const double nn = static_cast<double>(n);
  return nn * (B(static_cast<double>(k) / nn) -
               B(static_cast<double>(k - 1) / nn));
}

double DriftModel::u_over_B(double u) const {
  require_domain(u);
  const DriftSegment& s = segment_at(u);
  if (s.u0 == 0.0) {
    // B = u (b(0) + slope u / 2) exactly on the first segment
    return 1.0 / (s.b0 + 0.5 * s.slope * u);
  }
  return u / B(u);
}

double DriftModel::one_minus_u_over_B(double u) const {
  require_domain(u);
  const DriftSegment& s = segment_at(u);
  if (s.u1 == 1.0) {
    const double e = 1.0 - u;
    if (e == 0.0) return 1.0 / -s.b1;
    // B = B(1) + e (-b(1) + slope e / 2) on the last segment
    return 1.0 / (B1_ / e - s.b1 + 0.5 * s.slope * e);
  }
  return (1.0 - u) / B(u);
}

std::vector<double> DriftModel::interior_nodes() const {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i)
    out.push_back(segments_[i].u1);
  return out;
}

std::string DriftModel::describe() const {
  std::ostringstream os;
  if (kind_ == DriftKind::Linear)
    os << "linear(c=" << 2.0 * segments_.front().b0 << ")";
  else {
    os << "piecewise[";
    os << "(" << segments_.front().u0 << "," << segments_.front().b0 << ")";
    for (const auto& s : segments_) os << ",(" << s.u1 << "," << s.b1 << ")";
    os << "]";
  }
  os << ", sigma2=" << sigma2();
  return os.str();
}

namespace {

// Minimum of a ratio num(u)/den(u) on [lo,hi] within one segment, where the
// candidates are the interval endpoints and the roots of the quadratic
// d/du(num/den) numerator supplied by the caller.
struct RatioMin {
  double value = std::numeric_limits<double>::infinity();
  double arg = 0.0;
  void offer(double v, double u) {
    if (v < value) {
      value = v;
      arg = u;
    }
  }
};

}  // namespace

ValidationReport validate_assumption_E(const DriftModel& model, double tol) {
  ValidationReport rep;
  auto add = [&rep](const std::string& name, double measured, double tolerance,
                    bool passed) {
    rep.checks.push_back({name, measured, tolerance, passed});
    if (!passed) {
      if (!rep.message.empty()) rep.message += "; ";
      rep.message += name + " failed (measured " + std::to_string(measured) +
                     ")";
    }
  };

  const double B1 = model.B_at_1();
  add("|B(1)| <= tol", std::abs(B1), tol, std::abs(B1) <= tol);

  // strict decrease at nodes plus 1024 midpoints
  std::vector<double> grid;
  for (const auto& s : model.segments()) grid.push_back(s.u0);
  grid.push_back(1.0);
  for (int i = 0; i < 1024; ++i) grid.push_back((i + 0.5) / 1024.0);
  std::sort(grid.begin(), grid.end());
  double max_increment = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (grid[i + 1] <= grid[i]) continue;
    max_increment =
        std::max(max_increment, model.b(grid[i + 1]) - model.b(grid[i]));
  }
  add("b strictly decreasing", max_increment, 0.0, max_increment < 0.0);

  add("b(0) > 0", model.b_at_0(), 0.0, model.b_at_0() > 0.0);
  add("b(1) < 0", model.b_at_1(), 0.0, model.b_at_1() < 0.0);

  // min of B over the open interval: interior nodes and interior critical
  // points of each quadratic piece (B -> 0 at the endpoints is excluded).
  double minB = std::numeric_limits<double>::infinity();
  for (const auto& s : model.segments()) {
    if (s.u0 > 0.0) minB = std::min(minB, model.B(s.u0));
    if (s.slope != 0.0) {
      const double d = -s.b0 / s.slope;
      const double u = s.u0 + d;
      if (d > 0.0 && u < s.u1 && u > 0.0 && u < 1.0)
        minB = std::min(minB, model.B(u));
    }
  }
  if (!std::isfinite(minB)) minB = model.B(0.5);  // single segment, no nodes
  add("min B on (0,1) > 0", minB, 0.0, minB > 0.0);

  rep.passed = true;
  for (const auto& c : rep.checks) rep.passed = rep.passed && c.passed;
  if (rep.passed) rep.message = "assumption (E) satisfied";
  return rep;
}

InfimumRatios infimum_ratios(const DriftModel& model, double delta) {
  if (!(delta > 0.0 && delta < 0.5))
    throw std::invalid_argument("infimum_ratios requires delta in (0, 1/2)");

  InfimumRatios out{};

  // m_minus: inf of B(u)/u over [0, 1-delta]; the u -> 0 limit is b(0).
  {
    RatioMin rm;
    rm.offer(model.b_at_0(), 0.0);
    const double hi = 1.0 - delta;
    for (const auto& s : model.segments()) {
      const double lo_s = std::max(s.u0, 0.0);
      const double hi_s = std::min(s.u1, hi);
      if (!(lo_s < hi_s)) continue;
      if (lo_s > 0.0) rm.offer(model.B(lo_s) / lo_s, lo_s);
      rm.offer(model.B(hi_s) / hi_s, hi_s);
      // critical points: b(u) u - B(u) = 0, quadratic in d = u - u0
      const double a2 = 0.5 * s.slope;
      const double a1 = s.slope * s.u0;
      const double a0 = s.b0 * s.u0 - s.B0;
      const double disc = a1 * a1 - 4.0 * a2 * a0;
      if (a2 != 0.0 && disc >= 0.0) {
        const double sq = std::sqrt(disc);
        for (double d : {(-a1 - sq) / (2.0 * a2), (-a1 + sq) / (2.0 * a2)}) {
          const double u = s.u0 + d;
          if (u > lo_s && u < hi_s && u > 0.0) rm.offer(model.B(u) / u, u);
        }
      } else if (a2 == 0.0 && a1 != 0.0) {
        const double u = s.u0 - a0 / a1;
        if (u > lo_s && u < hi_s && u > 0.0) rm.offer(model.B(u) / u, u);
      }
    }
    out.m_minus = rm.value;
    out.argmin_minus = rm.arg;
  }

  // m_plus: inf of B(u)/(1-u) over [delta, 1]; the u -> 1 limit is -b(1).
  {
    RatioMin rm;
    rm.offer(-model.b_at_1(), 1.0);
    const double lo = delta;
    for (const auto& s : model.segments()) {
      const double lo_s = std::max(s.u0, lo);
      const double hi_s = std::min(s.u1, 1.0);
      if (!(lo_s < hi_s)) continue;
      rm.offer(model.B(lo_s) / (1.0 - lo_s), lo_s);
      if (hi_s < 1.0) rm.offer(model.B(hi_s) / (1.0 - hi_s), hi_s);
      // critical points: b(u)(1-u) + B(u) = 0, quadratic in d = u - u0
      const double a2 = -0.5 * s.slope;
      const double a1 = s.slope * (1.0 - s.u0);
      const double a0 = s.b0 * (1.0 - s.u0) + s.B0;
      const double disc = a1 * a1 - 4.0 * a2 * a0;
      if (a2 != 0.0 && disc >= 0.0) {
        const double sq = std::sqrt(disc);
        for (double d : {(-a1 - sq) / (2.0 * a2), (-a1 + sq) / (2.0 * a2)}) {
          const double u = s.u0 + d;
          if (u > lo_s && u < hi_s && u < 1.0)
            rm.offer(model.B(u) / (1.0 - u), u);
        }
      } else if (a2 == 0.0 && a1 != 0.0) {
        const double u = s.u0 - a0 / a1;
        if (u > lo_s && u < hi_s && u < 1.0) rm.offer(model.B(u) / (1.0 - u), u);
      }
    }
    out.m_plus = rm.value;
    out.argmin_plus = rm.arg;
  }

  return out;
}

}  // namespace rankdiff
