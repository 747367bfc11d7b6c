#include "rankdiff/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rankdiff {

namespace {

void require_order(double q) {
  if (!(q >= 1.0))
    throw std::invalid_argument("Wasserstein order must satisfy q >= 1");
}

double pair_cost(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, int i,
                 int j, double q) {
  double c = 0.0;
  for (Eigen::Index m = 0; m < X.cols(); ++m)
    c += std::pow(std::abs(X(i, m) - Y(j, m)), q);
  return c;
}

// Shortest-augmenting-path assignment with potentials (O(N^3)); returns the
// optimal column for each row.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const double INF = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, INF);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = INF;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

TransportResult wasserstein_1d(const Eigen::VectorXd& xs,
                               const Eigen::VectorXd& ys, double q) {
  require_order(q);
  if (xs.size() != ys.size())
    throw std::invalid_argument("1-D coupling requires equal sample sizes");
  if (xs.size() == 0) throw std::invalid_argument("empty sample");
  std::vector<double> a(xs.data(), xs.data() + xs.size());
  std::vector<double> b(ys.data(), ys.data() + ys.size());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    acc += std::pow(std::abs(a[i] - b[i]), q);
  acc /= static_cast<double>(a.size());
  return {q, std::pow(acc, 1.0 / q), TransportMethod::Quantile1D, {}};
}

TransportResult wasserstein_1d_vs_quantile(
    const Eigen::VectorXd& xs, const std::function<double(double)>& quantile,
    double q) {
  require_order(q);
  if (xs.size() == 0) throw std::invalid_argument("empty sample");
  std::vector<double> a(xs.data(), xs.data() + xs.size());
  std::sort(a.begin(), a.end());
  const double N = static_cast<double>(a.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double u = (static_cast<double>(i) + 0.5) / N;
    acc += std::pow(std::abs(a[i] - quantile(u)), q);
  }
  acc /= N;
  return {q, std::pow(acc, 1.0 / q), TransportMethod::Quantile1D, {}};
}

TransportResult wasserstein_assignment(const Eigen::MatrixXd& X,
                                       const Eigen::MatrixXd& Y, double q) {
  require_order(q);
  if (X.rows() != Y.rows() || X.cols() != Y.cols())
    throw std::invalid_argument("assignment requires equal sample shapes");
  if (X.rows() < 1) throw std::invalid_argument("empty sample");
  if (X.rows() > 4096)
    throw std::invalid_argument("assignment solver capped at N <= 4096");
  if (X.cols() > 8)
    throw std::invalid_argument("assignment solver capped at k <= 8");
  const int n = static_cast<int>(X.rows());
  Eigen::MatrixXd cost(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cost(i, j) = pair_cost(X, Y, i, j, q);
  std::vector<int> match = solve_assignment(cost);
  double total = 0.0;
  for (int i = 0; i < n; ++i) total += cost(i, match[i]);
  return {q, std::pow(total / n, 1.0 / q), TransportMethod::AssignmentExact,
          std::move(match)};
}

TransportResult wasserstein_brute_force(const Eigen::MatrixXd& X,
                                        const Eigen::MatrixXd& Y, double q) {
  require_order(q);
  if (X.rows() != Y.rows() || X.cols() != Y.cols())
    throw std::invalid_argument("assignment requires equal sample shapes");
  if (X.rows() < 1 || X.rows() > 8)
    throw std::invalid_argument("brute-force oracle capped at N <= 8");
  const int n = static_cast<int>(X.rows());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_perm = perm;
  do {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += pair_cost(X, Y, i, perm[i], q);
    if (total < best) {
      best = total;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {q, std::pow(best / n, 1.0 / q),
          TransportMethod::AssignmentBruteForce, std::move(best_perm)};
}

}  // namespace rankdiff
