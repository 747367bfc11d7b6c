#include "rankdiff/finite_law.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rankdiff {

namespace {

void require_rank(long long n, long long k) {
  if (k < 1 || k > n - 1)
    throw std::invalid_argument("rank index k must lie in 1..n-1, got k=" +
                                std::to_string(k));
}

[[noreturn]] void throw_denominator(const char* family, long long k,
                                    double value) {
  std::ostringstream os;
  os << "Laplace product infeasible: denominator family " << family
     << " is " << value << " <= 0 at k=" << k;
  throw std::domain_error(os.str());
}

double positive_part(double x) { return x > 0.0 ? x : 0.0; }
double negative_part(double x) { return x < 0.0 ? -x : 0.0; }

// Exact minimum over [lo,hi] of B(u) - alpha u - beta (1-u), which is
// quadratic on every drift segment.
double min_linearisation_gap(const DriftModel& model, double lo, double hi,
                             double alpha, double beta) {
  double best = std::numeric_limits<double>::infinity();
  auto offer = [&](double u) {
    const double v = model.B(u) - alpha * u - beta * (1.0 - u);
    best = std::min(best, v);
  };
  for (const auto& s : model.segments()) {
    const double a = std::max(lo, s.u0);
    const double b = std::min(hi, s.u1);
    if (!(a <= b)) continue;
    offer(a);
    offer(b);
    if (s.slope != 0.0) {
      // critical point of the gap: b(u) = alpha - beta
      const double u = s.u0 + ((alpha - beta) - s.b0) / s.slope;
      if (u > a && u < b) offer(u);
    }
  }
  return best;
}

}  // namespace

double f_plus(const DriftModel& model, long long n, long long k, double r) {
  require_rank(n, k);
  const double u = static_cast<double>(k) / static_cast<double>(n);
  return r * model.sigma2() / (2.0 * static_cast<double>(n)) *
         model.u_over_B(u);
}

double f_minus(const DriftModel& model, long long n, long long k, double r) {
  require_rank(n, k);
  const double u = static_cast<double>(k) / static_cast<double>(n);
  return -r * model.sigma2() / (2.0 * static_cast<double>(n)) *
         model.one_minus_u_over_B(u);
}

DenominatorFamilies denominator_families(const DriftModel& model, long long n,
                                         long long k, double s, double t) {
  const double fp_st = f_plus(model, n, k, s + t);
  const double fm_st = f_minus(model, n, k, s + t);
  const double fp_s = f_plus(model, n, k, s);
  const double fp_t = f_plus(model, n, k, t);
  const double fm_s = f_minus(model, n, k, s);
  const double fm_t = f_minus(model, n, k, t);
  return {1.0 - fp_st, 1.0 - fp_t - fm_s, 1.0 - fp_s - fm_t, 1.0 - fm_st};
}

FeasibilityCertificate feasibility(const DriftModel& model, long long n,
                                   double s, double t) {
  if (n < 2) throw std::invalid_argument("feasibility requires n >= 2");
  FeasibilityCertificate cert;
  cert.n = n;
  cert.s = s;
  cert.t = t;
  cert.min_plus_st = cert.min_mid_ts = cert.min_mid_st = cert.min_minus_st =
      std::numeric_limits<double>::infinity();
  cert.argmin_plus_st = cert.argmin_mid_ts = cert.argmin_mid_st =
      cert.argmin_minus_st = 0;
  for (long long k = 1; k <= n - 1; ++k) {
    const DenominatorFamilies d = denominator_families(model, n, k, s, t);
    if (d.plus_st < cert.min_plus_st) {
      cert.min_plus_st = d.plus_st;
      cert.argmin_plus_st = k;
    }
    if (d.mid_ts < cert.min_mid_ts) {
      cert.min_mid_ts = d.mid_ts;
      cert.argmin_mid_ts = k;
    }
    if (d.mid_st < cert.min_mid_st) {
      cert.min_mid_st = d.mid_st;
      cert.argmin_mid_st = k;
    }
    if (d.minus_st < cert.min_minus_st) {
      cert.min_minus_st = d.minus_st;
      cert.argmin_minus_st = k;
    }
  }
  cert.min_denominator = std::min({cert.min_plus_st, cert.min_mid_ts,
                                   cert.min_mid_st, cert.min_minus_st});
  cert.feasible = cert.min_denominator > 0.0;
  return cert;
}

EpsilonDeltaPlan plan_epsilon_delta(const DriftModel& model, double s,
                                    double t) {
  const double s2 = model.sigma2();
  const double b0 = model.b_at_0();
  const double b1 = model.b_at_1();
  const double v_lo = -2.0 * b0 / s2;
  const double v_hi = -2.0 * b1 / s2;
  for (double r : {s, t, s + t})
    if (!(r > v_lo && r < v_hi)) {
      std::ostringstream os;
      os << "(s,t)=(" << s << "," << t << ") not strictly inside V_2 = "
         << "{s,t,s+t in (" << v_lo << ", " << v_hi << ")}";
      throw std::domain_error(os.str());
    }

  EpsilonDeltaPlan plan;
  double slack = std::min(b0, -b1);
  for (double r : {s, t, s + t}) {
    slack = std::min(slack, b0 + 0.5 * r * s2);
    slack = std::min(slack, -b1 - 0.5 * r * s2);
  }
  plan.epsilon = 0.5 * slack;

  // largest delta whose endpoint linearisations hold, verified exactly on
  // the piecewise-quadratic B
  const double c_lo = b0 - plan.epsilon;
  const double c_hi = -b1 - plan.epsilon;
  double delta = 0.0;
  for (double cand = 0.499; cand > 1e-12; cand *= 0.85) {
    if (min_linearisation_gap(model, 0.0, cand, c_lo, 0.0) >= 0.0 &&
        min_linearisation_gap(model, 1.0 - cand, 1.0, 0.0, c_hi) >= 0.0) {
      delta = cand;
      break;
    }
  }
  if (delta == 0.0)
    throw std::runtime_error("no admissible delta found for the plan");
  plan.delta = delta;

  auto alpha_plus = [&](double r) { return positive_part(r) * s2 / (2.0 * c_hi); };
  auto alpha_minus = [&](double r) { return negative_part(r) * s2 / (2.0 * c_lo); };
  plan.alpha_plus_s = alpha_plus(s);
  plan.alpha_minus_s = alpha_minus(s);
  plan.alpha_plus_t = alpha_plus(t);
  plan.alpha_minus_t = alpha_minus(t);
  plan.alpha_plus_st = alpha_plus(s + t);
  plan.alpha_minus_st = alpha_minus(s + t);
  plan.alpha_bar = std::max({0.5, plan.alpha_plus_st, plan.alpha_minus_st,
                             0.5 * (plan.alpha_plus_s + 1.0),
                             0.5 * (plan.alpha_minus_s + 1.0),
                             0.5 * (plan.alpha_plus_t + 1.0),
                             0.5 * (plan.alpha_minus_t + 1.0)});

  const InfimumRatios inf = infimum_ratios(model, delta);
  plan.m_minus = inf.m_minus;
  plan.m_plus = inf.m_plus;

  // smallness conditions: the displayed set for the (s,t) ordering, its
  // mirror under s <-> t, and the negative-part analogue for f-(s+t)
  const double mm = inf.m_minus, mp = inf.m_plus;
  double need = 2.0;
  auto require_n = [&need](double v) { need = std::max(need, v); };
  require_n(positive_part(s + t) * s2 / mm);
  require_n(positive_part(t) * s2 / (mm * (1.0 - plan.alpha_minus_s)));
  require_n(positive_part(t) * s2 / mm + negative_part(s) * s2 / mp);
  require_n(negative_part(s) * s2 / (mp * (1.0 - plan.alpha_plus_t)));
  require_n(positive_part(s) * s2 / (mm * (1.0 - plan.alpha_minus_t)));
  require_n(positive_part(s) * s2 / mm + negative_part(t) * s2 / mp);
  require_n(negative_part(t) * s2 / (mp * (1.0 - plan.alpha_plus_s)));
  require_n(negative_part(s + t) * s2 / mp);
  plan.n0 = std::max<long long>(2, static_cast<long long>(std::ceil(need)));
  return plan;
}

FiniteLaw::FiniteLaw(DriftModel model, long long n)
    : model_(std::move(model)), n_(n) {
  if (n_ < 2) throw std::invalid_argument("FiniteLaw requires n >= 2");
  const ValidationReport rep = validate_assumption_E(model_);
  if (!rep.passed)
    throw std::invalid_argument("drift model violates the equilibrium "
                                "assumption: " + rep.message);
  rank_weights_.resize(n_);
  for (long long k = 1; k <= n_; ++k)
    rank_weights_(k - 1) = model_.b_n(n_, k);
  gap_rates_.resize(n_ - 1);
  const double s2 = model_.sigma2();
  for (long long k = 1; k <= n_ - 1; ++k) {
    const double u = static_cast<double>(k) / static_cast<double>(n_);
    gap_rates_(k - 1) = 2.0 * static_cast<double>(n_) * model_.B(u) / s2;
  }
}

double FiniteLaw::f_plus(long long k, double r) const {
  return rankdiff::f_plus(model_, n_, k, r);
}

double FiniteLaw::f_minus(long long k, double r) const {
  return rankdiff::f_minus(model_, n_, k, r);
}

double FiniteLaw::log_density_unnormalized(const Eigen::VectorXd& z) const {
  if (z.size() != n_)
    throw std::invalid_argument("state dimension does not match n");
  const double sum = z.sum();
  if (std::abs(sum) > 1e-9 * static_cast<double>(n_))
    throw std::invalid_argument(
        "state is off the zero-sum hyperplane: sum=" + std::to_string(sum));
  std::vector<double> sorted(z.data(), z.data() + z.size());
  std::stable_sort(sorted.begin(), sorted.end());
  double acc = 0.0;
  for (long long k = 0; k < n_; ++k) acc += rank_weights_(k) * sorted[k];
  return 2.0 / model_.sigma2() * acc;
}

void FiniteLaw::draw(std::mt19937_64& rng, Eigen::VectorXd& out) const {
  out.resize(n_);
  // ordered positions relative to the minimum, then center to the hyperplane
  double pos = 0.0, total = 0.0;
  out(0) = 0.0;
  for (long long k = 1; k < n_; ++k) {
    pos += exponential(rng, gap_rates_(k - 1));
    out(k) = pos;
    total += pos;
  }
  const double mean = total / static_cast<double>(n_);
  for (long long k = 0; k < n_; ++k) out(k) -= mean;
  // uniform random permutation of the ordered coordinates
  for (long long k = n_ - 1; k > 0; --k) {
    std::uniform_int_distribution<long long> pick(0, k);
    std::swap(out(k), out(pick(rng)));
  }
}

EmpiricalSample FiniteLaw::sample(std::uint64_t seed,
                                  std::size_t count) const {
  if (count == 0)
    throw std::invalid_argument("sample count must be positive");
  EmpiricalSample out;
  out.dimension = static_cast<int>(n_);
  out.draws.resize(static_cast<Eigen::Index>(count), n_);
  std::mt19937_64 rng = make_stream(seed, 0);
  Eigen::VectorXd z;
  for (std::size_t i = 0; i < count; ++i) {
    draw(rng, z);
    out.draws.row(static_cast<Eigen::Index>(i)) = z.transpose();
  }
  out.tag = {"finite-gap-exponential", seed, n_, count};
  return out;
}

double FiniteLaw::laplace_I(long long i, double t) const {
  if (i < 1 || i > n_)
    throw std::invalid_argument("coordinate index out of range");
  double acc = 0.0;
  for (long long k = 1; k <= i - 1; ++k) {
    const double x = -f_plus(k, t);
    if (1.0 + x <= 0.0) throw_denominator("1 - f+(t)", k, 1.0 + x);
    acc -= std::log1p(x);
  }
  for (long long k = i; k <= n_ - 1; ++k) {
    const double x = -f_minus(k, t);
    if (1.0 + x <= 0.0) throw_denominator("1 - f-(t)", k, 1.0 + x);
    acc -= std::log1p(x);
  }
  return std::exp(acc);
}

double FiniteLaw::laplace_L1n(double t) const {
  // log I_i = -sum_{k<i} log(1-f+_k(t)) - sum_{k>=i} log(1-f-_k(t)); both
  // sums are prefix-representable, so the average costs O(n).
  std::vector<double> pref_plus(n_, 0.0), pref_minus(n_, 0.0);
  for (long long k = 1; k <= n_ - 1; ++k) {
    const double xp = -f_plus(k, t);
    if (1.0 + xp <= 0.0) throw_denominator("1 - f+(t)", k, 1.0 + xp);
    const double xm = -f_minus(k, t);
    if (1.0 + xm <= 0.0) throw_denominator("1 - f-(t)", k, 1.0 + xm);
    pref_plus[k] = pref_plus[k - 1] + std::log1p(xp);
    pref_minus[k] = pref_minus[k - 1] + std::log1p(xm);
  }
  const double total_minus = pref_minus[n_ - 1];
  double acc = 0.0;
  for (long long i = 1; i <= n_; ++i)
    acc += std::exp(-pref_plus[i - 1] - (total_minus - pref_minus[i - 1]));
  return acc / static_cast<double>(n_);
}

double FiniteLaw::laplace_J(long long i, long long j, double s,
                            double t) const {
  if (i == j) throw std::invalid_argument("laplace_J requires i != j");
  if (i < 1 || i > n_ || j < 1 || j > n_)
    throw std::invalid_argument("coordinate index out of range");
  const long long lo = std::min(i, j), hi = std::max(i, j);
  // middle factor carries (t,s) if i < j and (s,t) if j < i
  const double mid_plus = (i < j) ? t : s;
  const double mid_minus = (i < j) ? s : t;
  double acc = 0.0;
  for (long long k = 1; k <= lo - 1; ++k) {
    const double x = -f_plus(k, s + t);
    if (1.0 + x <= 0.0) throw_denominator("1 - f+(s+t)", k, 1.0 + x);
    acc -= std::log1p(x);
  }
  for (long long k = lo; k <= hi - 1; ++k) {
    const double x = -f_plus(k, mid_plus) - f_minus(k, mid_minus);
    if (1.0 + x <= 0.0) throw_denominator("1 - f+ - f-", k, 1.0 + x);
    acc -= std::log1p(x);
  }
  for (long long k = hi; k <= n_ - 1; ++k) {
    const double x = -f_minus(k, s + t);
    if (1.0 + x <= 0.0) throw_denominator("1 - f-(s+t)", k, 1.0 + x);
    acc -= std::log1p(x);
  }
  return std::exp(acc);
}

struct FiniteLaw::PrefixArrays {
  std::vector<double> A, C, Mst, Mts;  // prefix sums, index m = through k=m
  double Ctot = 0.0;
};

void FiniteLaw::build_prefixes(double s, double t, PrefixArrays& out) const {
  out.A.assign(n_, 0.0);
  out.C.assign(n_, 0.0);
  out.Mst.assign(n_, 0.0);
  out.Mts.assign(n_, 0.0);
  for (long long k = 1; k <= n_ - 1; ++k) {
    const double fp_st = f_plus(k, s + t);
    const double fm_st = f_minus(k, s + t);
    const double fp_s = f_plus(k, s);
    const double fp_t = f_plus(k, t);
    const double fm_s = f_minus(k, s);
    const double fm_t = f_minus(k, t);
    if (1.0 - fp_st <= 0.0) throw_denominator("1 - f+(s+t)", k, 1.0 - fp_st);
    if (1.0 - fm_st <= 0.0) throw_denominator("1 - f-(s+t)", k, 1.0 - fm_st);
    if (1.0 - fp_t - fm_s <= 0.0)
      throw_denominator("1 - f+(t) - f-(s)", k, 1.0 - fp_t - fm_s);
    if (1.0 - fp_s - fm_t <= 0.0)
      throw_denominator("1 - f+(s) - f-(t)", k, 1.0 - fp_s - fm_t);
    out.A[k] = out.A[k - 1] + std::log1p(-fp_st);
    out.C[k] = out.C[k - 1] + std::log1p(-fm_st);
    out.Mst[k] = out.Mst[k - 1] + std::log1p(-fp_t - fm_s);
    out.Mts[k] = out.Mts[k - 1] + std::log1p(-fp_s - fm_t);
  }
  out.Ctot = out.C[n_ - 1];
}

double FiniteLaw::laplace_L2n(double s, double t) const {
  // For i < j:  log J_ij = (Mst[i-1]-A[i-1]) + (C[j-1]-Mst[j-1]) - Ctot,
  // so the double sum factorises over a single running prefix; likewise
  // for i > j with the mirrored middle family.
  PrefixArrays p;
  build_prefixes(s, t, p);
  double total_lower = 0.0, running = 0.0;
  for (long long j = 2; j <= n_; ++j) {
    running += std::exp(p.Mst[j - 2] - p.A[j - 2]);
    total_lower += std::exp(p.C[j - 1] - p.Mst[j - 1] - p.Ctot) * running;
  }
  double total_upper = 0.0;
  running = 0.0;
  for (long long i = 2; i <= n_; ++i) {
    running += std::exp(p.Mts[i - 2] - p.A[i - 2]);
    total_upper += std::exp(p.C[i - 1] - p.Mts[i - 1] - p.Ctot) * running;
  }
  return (total_lower + total_upper) /
         (static_cast<double>(n_) * static_cast<double>(n_ - 1));
}

std::vector<McLaplaceCheck> FiniteLaw::mc_laplace_check(
    std::uint64_t seed, std::size_t count,
    const std::vector<std::pair<double, double>>& points) const {
  if (count == 0)
    throw std::invalid_argument("sample count must be positive");
  std::vector<double> sums(points.size(), 0.0), sq(points.size(), 0.0);
  std::mt19937_64 rng = make_stream(seed, 0);
  Eigen::VectorXd z;
  for (std::size_t i = 0; i < count; ++i) {
    draw(rng, z);
    for (std::size_t p = 0; p < points.size(); ++p) {
      const double v =
          std::exp(points[p].first * z(0) + points[p].second * z(1));
      sums[p] += v;
      sq[p] += v * v;
    }
  }
  std::vector<McLaplaceCheck> out;
  out.reserve(points.size());
  const double nc = static_cast<double>(count);
  for (std::size_t p = 0; p < points.size(); ++p) {
    McLaplaceCheck c;
    c.s = points[p].first;
    c.t = points[p].second;
    c.estimate = sums[p] / nc;
    const double var = std::max(0.0, sq[p] / nc - c.estimate * c.estimate);
    c.std_error = std::sqrt(var / nc);
    c.exact = laplace_L2n(c.s, c.t);
    const double gap = std::abs(c.estimate - c.exact);
    // a degenerate direction (constant statistic) has se = 0 and gap = 0
    c.zscore = c.std_error > 0.0
                   ? gap / c.std_error
                   : (gap == 0.0 ? 0.0
                                 : std::numeric_limits<double>::infinity());
    out.push_back(c);
  }
  return out;
}

}  // namespace rankdiff
