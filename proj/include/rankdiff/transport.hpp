#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

namespace rankdiff {

enum class TransportMethod { Quantile1D, AssignmentExact, AssignmentBruteForce };

struct TransportResult {
  double q = 1.0;
  double distance = 0.0;
  TransportMethod method = TransportMethod::Quantile1D;
  // optimal permutation (row of X -> row of Y) for the assignment solvers
  std::optional<std::vector<int>> matching;
};

// Order-q distance between two equal-size scalar samples: the sorted
// coupling, which is the exact optimum in one dimension.
TransportResult wasserstein_1d(const Eigen::VectorXd& xs,
                               const Eigen::VectorXd& ys, double q);

// Distance between a scalar sample and an analytic law given by its
// quantile function, via the midpoint quantile coupling.
TransportResult wasserstein_1d_vs_quantile(
    const Eigen::VectorXd& xs, const std::function<double(double)>& quantile,
    double q);

// Exact optimal assignment between two k-dimensional samples (rows), cost
// of a pair sum_m |x_m - y_m|^q per the l^q ground norm.  N <= 4096, k <= 8.
TransportResult wasserstein_assignment(const Eigen::MatrixXd& X,
                                       const Eigen::MatrixXd& Y, double q);

// Enumeration oracle, N <= 8.
TransportResult wasserstein_brute_force(const Eigen::MatrixXd& X,
                                        const Eigen::MatrixXd& Y, double q);

}  // namespace rankdiff
