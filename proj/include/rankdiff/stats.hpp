#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace rankdiff {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

inline MeanSe mean_and_se(const Eigen::VectorXd& x) {
  const double n = static_cast<double>(x.size());
  const double m = x.mean();
  const double var = (x.array() - m).square().sum() / std::max(1.0, n - 1.0);
  return {m, std::sqrt(var / n)};
}

// Batch-means standard error of the series mean; robust to autocorrelation
// when each batch spans several correlation times.
inline MeanSe batch_means(const Eigen::VectorXd& x, int batches = 50) {
  const long long n = x.size();
  batches = static_cast<int>(
      std::max<long long>(2, std::min<long long>(batches, n / 2)));
  const long long width = n / batches;
  Eigen::VectorXd bm(batches);
  for (int b = 0; b < batches; ++b)
    bm(b) = x.segment(b * width, width).mean();
  const double m = bm.mean();
  const double var =
      (bm.array() - m).square().sum() / static_cast<double>(batches - 1);
  return {m, std::sqrt(var / static_cast<double>(batches))};
}

// Autocorrelation-based effective sample size (initial positive sequence
// truncation on lag pairs).
inline double effective_sample_size(const Eigen::VectorXd& x,
                                    int max_lag = 512) {
  const long long n = x.size();
  if (n < 4) return static_cast<double>(n);
  const double m = x.mean();
  Eigen::VectorXd c = x.array() - m;
  const double c0 = c.squaredNorm() / static_cast<double>(n);
  if (c0 <= 0.0) return static_cast<double>(n);
  auto rho = [&](long long lag) {
    return c.head(n - lag).dot(c.tail(n - lag)) /
           (static_cast<double>(n) * c0);
  };
  double tail = 0.0;
  const long long cap = std::min<long long>(max_lag, n / 2 - 1);
  for (long long lag = 1; lag + 1 <= cap; lag += 2) {
    const double pair = rho(lag) + rho(lag + 1);
    if (pair <= 0.0) break;
    tail += pair;
  }
  return static_cast<double>(n) / (1.0 + 2.0 * tail);
}

// Percentile bootstrap of a statistic over resamples of a sample; `stat`
// receives the resampled values.
struct BootstrapBand {
  double se;
  double lo;
  double hi;
};

template <class Stat>
BootstrapBand bootstrap_band(const Eigen::VectorXd& sample, Stat stat,
                             int resamples, std::mt19937_64& rng) {
  const long long n = sample.size();
  std::uniform_int_distribution<long long> pick(0, n - 1);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(resamples));
  Eigen::VectorXd re(n);
  for (int b = 0; b < resamples; ++b) {
    for (long long i = 0; i < n; ++i) re(i) = sample(pick(rng));
    values.push_back(stat(re));
  }
  std::sort(values.begin(), values.end());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= std::max<std::size_t>(1, values.size() - 1);
  const auto q = [&](double p) {
    const double pos = p * static_cast<double>(values.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return i + 1 < values.size()
               ? values[i] * (1.0 - frac) + values[i + 1] * frac
               : values[i];
  };
  return {std::sqrt(var), q(0.025), q(0.975)};
}

}  // namespace rankdiff
