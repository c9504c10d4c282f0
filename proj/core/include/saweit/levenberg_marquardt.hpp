#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace saweit {

struct LmOptions {
  int max_iterations = 500;
  double initial_damping = 1e-3;
  double damping_factor = 10.0;
  // Converged when ||J^T r|| < gradient_tolerance * (1 + cost).
  double gradient_tolerance = 1e-10;
  // ...or when every Jacobian column is this close to orthogonal to r.
  double orthogonality_tolerance = 1e-8;
  // Once no step lowers the cost: accept if a Gauss-Newton step would gain
  // less than this fraction of it.
  double cost_tolerance = 1e-10;
  // Relative step below which the iterate is considered stationary.
  double step_tolerance = 1e-15;
};

using ResidualFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFunction = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

struct LmProblem {
  ResidualFunction residuals;
  JacobianFunction jacobian;      // empty: central differences
  std::vector<bool> nonnegative;  // clamp at zero, flag when active
  std::vector<bool> fixed;        // held at the initial value
};

struct LmSummary {
  Eigen::VectorXd params;
  Eigen::VectorXd residuals;
  Eigen::MatrixXd jacobian;  // free columns only are meaningful
  double cost = 0.0;         // 0.5 * ||r||^2
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<bool> at_bound;
};

Eigen::MatrixXd finite_difference_jacobian(const ResidualFunction& f, const Eigen::VectorXd& x);

LmSummary levenberg_marquardt(const LmProblem& problem, Eigen::VectorXd initial,
                              const LmOptions& options = {});

/// Covariance s^2 (J^T J)^-1 over the free parameters, s^2 = ||r||^2 / (n - p).
/// Fixed parameters get zero rows and columns. Uses a pseudo-inverse so a
/// rank-deficient Jacobian yields finite (if meaningless) output; callers flag
/// degeneracy separately.
Eigen::MatrixXd residual_scaled_covariance(const LmSummary& summary,
                                           const std::vector<bool>& fixed);

}  // namespace saweit
