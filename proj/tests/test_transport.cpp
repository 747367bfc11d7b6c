#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rankdiff/nonlinear_law.hpp"
#include "rankdiff/quadrature.hpp"
#include "rankdiff/sample.hpp"
#include "rankdiff/transport.hpp"

using namespace rankdiff;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Eigen::MatrixXd gaussian_cloud(int n, int k, std::uint64_t seed) {
  std::mt19937_64 rng = make_stream(seed, 0);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd m(n, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) m(i, j) = g(rng);
  return m;
}

}  // namespace

TEST_CASE("sorted coupling closed forms") {
  CHECK(wasserstein_1d(vec({0, 1}), vec({2, 3}), 1.0).distance ==
        doctest::Approx(2.0));
  CHECK(wasserstein_1d(vec({0, 1}), vec({2, 3}), 2.0).distance ==
        doctest::Approx(2.0));
  CHECK(wasserstein_1d(vec({-1, 4, 2}), vec({4, 2, -1}), 1.0).distance == 0.0);
  CHECK_THROWS_AS(wasserstein_1d(vec({0, 1}), vec({2}), 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(wasserstein_1d(vec({0, 1}), vec({2, 3}), 0.5),
                  std::invalid_argument);
}

TEST_CASE("quantile coupling vanishes on its own grid") {
  const int N = 1000;
  auto quantile = [](double u) { return std::log(u / (1.0 - u)); };
  Eigen::VectorXd xs(N);
  for (int i = 0; i < N; ++i) xs(i) = quantile((i + 0.5) / N);
  CHECK(wasserstein_1d_vs_quantile(xs, quantile, 1.0).distance == 0.0);
  CHECK(wasserstein_1d_vs_quantile(xs, quantile, 2.0).distance == 0.0);
}

TEST_CASE("finite two-particle marginal vs mean-field quantile") {
  // z_1 under n=2 is Laplace(1); quantile difference vs logistic is explicit
  auto laplace_q = [](double u) {
    return u < 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
  };
  auto logistic_q = [](double u) { return std::log(u / (1.0 - u)); };
  const double exact = integrate(
      [&](double u) { return std::abs(laplace_q(u) - logistic_q(u)); }, 1e-9,
      1.0 - 1e-9, 1e-10, 1e-12);
  const int N = 200000;
  Eigen::VectorXd xs(N);
  std::mt19937_64 rng = make_stream(21, 0);
  for (int i = 0; i < N; ++i) xs(i) = laplace_q(uniform_open01(rng));
  const double w1 = wasserstein_1d_vs_quantile(xs, logistic_q, 1.0).distance;
  CHECK(w1 > 0.0);
  CHECK(w1 < 1.0);
  CHECK(w1 == doctest::Approx(exact).epsilon(0.05));
}

TEST_CASE("assignment equals enumeration on small instances") {
  std::mt19937_64 rng = make_stream(33, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 2 + static_cast<int>(rng() % 6);  // N <= 7
    const int k = 1 + static_cast<int>(rng() % 3);
    const Eigen::MatrixXd X = gaussian_cloud(n, k, 1000 + rep);
    const Eigen::MatrixXd Y = gaussian_cloud(n, k, 2000 + rep);
    for (double q : {1.0, 2.0}) {
      const TransportResult a = wasserstein_assignment(X, Y, q);
      const TransportResult b = wasserstein_brute_force(X, Y, q);
      CHECK(std::abs(a.distance - b.distance) <= 1e-10);
      REQUIRE(a.matching.has_value());
    }
  }
}

TEST_CASE("1-D assignment reduces to the sorted coupling") {
  const Eigen::MatrixXd X = gaussian_cloud(128, 1, 5);
  const Eigen::MatrixXd Y = gaussian_cloud(128, 1, 6);
  for (double q : {1.0, 2.0, 4.0}) {
    const double a = wasserstein_assignment(X, Y, q).distance;
    const double b = wasserstein_1d(X.col(0), Y.col(0), q).distance;
    CHECK(std::abs(a - b) <= 1e-12);
  }
}

TEST_CASE("permuted clouds are at distance zero") {
  Eigen::MatrixXd X = gaussian_cloud(9, 3, 7);
  Eigen::MatrixXd Y(9, 3);
  const int perm[9] = {4, 1, 8, 0, 3, 2, 7, 5, 6};
  for (int i = 0; i < 9; ++i) Y.row(perm[i]) = X.row(i);
  CHECK(wasserstein_assignment(X, Y, 2.0).distance == doctest::Approx(0.0));
  Eigen::MatrixXd X2(2, 2), Y2(2, 2);
  X2 << 0, 0, 1, 1;
  Y2 << 1, 1, 0, 0;
  CHECK(wasserstein_brute_force(X2, Y2, 2.0).distance == doctest::Approx(0.0));
}

TEST_CASE("single-pair brute force is the ground norm") {
  Eigen::MatrixXd X(1, 2), Y(1, 2);
  X << 0.0, 0.0;
  Y << 3.0, 4.0;
  CHECK(wasserstein_brute_force(X, Y, 1.0).distance == doctest::Approx(7.0));
  CHECK(wasserstein_brute_force(X, Y, 2.0).distance == doctest::Approx(5.0));
}

TEST_CASE("metric axioms on random clouds") {
  std::mt19937_64 rng = make_stream(44, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const int k = 1 + static_cast<int>(rng() % 2);
    const Eigen::MatrixXd X = gaussian_cloud(n, k, 300 + rep);
    const Eigen::MatrixXd Y = gaussian_cloud(n, k, 400 + rep);
    const Eigen::MatrixXd Z = gaussian_cloud(n, k, 500 + rep);
    const double q = (rep % 2) ? 1.0 : 2.0;
    const double xy = wasserstein_assignment(X, Y, q).distance;
    const double yx = wasserstein_assignment(Y, X, q).distance;
    const double yz = wasserstein_assignment(Y, Z, q).distance;
    const double xz = wasserstein_assignment(X, Z, q).distance;
    CHECK(xy == doctest::Approx(yx).epsilon(1e-12));
    CHECK(xz <= xy + yz + 1e-10);
    CHECK(wasserstein_assignment(X, X, q).distance ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("order monotonicity in one dimension and scale equivariance") {
  // q -> W_q is nondecreasing when the ground norm does not change with q;
  // with the l^q ground norm that is the scalar case (for k >= 2 the norm
  // itself shrinks with q and can dominate the moment growth)
  const Eigen::MatrixXd X1 = gaussian_cloud(64, 1, 8);
  const Eigen::MatrixXd Y1 = gaussian_cloud(64, 1, 9);
  double prev = 0.0;
  for (double q : {1.0, 2.0, 4.0}) {
    const double d = wasserstein_assignment(X1, Y1, q).distance;
    CHECK(d >= prev - 1e-12);
    prev = d;
  }
  const Eigen::MatrixXd X = gaussian_cloud(64, 2, 8);
  const Eigen::MatrixXd Y = gaussian_cloud(64, 2, 9);
  for (double c : {-2.5, 0.25, 3.0}) {
    const double base = wasserstein_assignment(X, Y, 2.0).distance;
    const double scaled =
        wasserstein_assignment(c * X, c * Y, 2.0).distance;
    CHECK(scaled == doctest::Approx(std::abs(c) * base).epsilon(1e-12));
  }
}

TEST_CASE("certificate permutation beats random matchings") {
  const int n = 24;
  const Eigen::MatrixXd X = gaussian_cloud(n, 2, 10);
  const Eigen::MatrixXd Y = gaussian_cloud(n, 2, 11);
  const TransportResult r = wasserstein_assignment(X, Y, 2.0);
  REQUIRE(r.matching.has_value());
  auto cost_of = [&](const std::vector<int>& perm) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double c = 0.0;
      for (int m = 0; m < 2; ++m)
        c += std::pow(std::abs(X(i, m) - Y(perm[i], m)), 2.0);
      total += c;
    }
    return total / n;
  };
  const double optimal = cost_of(*r.matching);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng = make_stream(55, 0);
  for (int rep = 0; rep < 1000; ++rep) {
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(optimal <= cost_of(perm) + 1e-12);
  }
}

TEST_CASE("size caps") {
  const Eigen::MatrixXd big = gaussian_cloud(9, 1, 12);
  CHECK_THROWS_AS(wasserstein_brute_force(big, big, 1.0),
                  std::invalid_argument);
  const Eigen::MatrixXd wide = gaussian_cloud(4, 9, 13);
  CHECK_THROWS_AS(wasserstein_assignment(wide, wide, 1.0),
                  std::invalid_argument);
}
