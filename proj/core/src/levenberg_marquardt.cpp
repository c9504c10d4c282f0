#include "saweit/levenberg_marquardt.hpp"

#include <cmath>
#include <limits>

#include "saweit/errors.hpp"

namespace saweit {
namespace {

bool flag(const std::vector<bool>& v, Eigen::Index i) {
  return static_cast<std::size_t>(i) < v.size() && v[static_cast<std::size_t>(i)];
}

Eigen::MatrixXd masked(Eigen::MatrixXd j, const std::vector<bool>& fixed) {
  for (Eigen::Index c = 0; c < j.cols(); ++c) {
    if (flag(fixed, c)) j.col(c).setZero();
  }
  return j;
}

// Largest cosine between r and a Jacobian column; zero at a stationary point
// independently of how parameters and residuals are scaled.
double orthogonality(const Eigen::MatrixXd& j, const Eigen::VectorXd& r) {
  const double rn = r.norm();
  if (rn == 0.0) return 0.0;
  double worst = 0.0;
  for (Eigen::Index c = 0; c < j.cols(); ++c) {
    const double cn = j.col(c).norm();
    if (cn > 0.0) worst = std::max(worst, std::abs(j.col(c).dot(r)) / (cn * rn));
  }
  return worst;
}

// Cost decrease a full Gauss-Newton step would give, 0.5 g^T (J^T J)^+ g.
double predicted_reduction(const Eigen::MatrixXd& j, const Eigen::VectorXd& g) {
  const Eigen::MatrixXd jtj = j.transpose() * j;
  return 0.5 * g.dot(jtj.completeOrthogonalDecomposition().solve(g));
}

}  // namespace

Eigen::MatrixXd finite_difference_jacobian(const ResidualFunction& f, const Eigen::VectorXd& x) {
  const Eigen::VectorXd r0 = f(x);
  Eigen::MatrixXd j(r0.size(), x.size());
  const double eps = std::cbrt(std::numeric_limits<double>::epsilon());
  for (Eigen::Index c = 0; c < x.size(); ++c) {
    const double h = eps * std::max(1.0, std::abs(x(c)));
    Eigen::VectorXd xp = x;
    Eigen::VectorXd xm = x;
    xp(c) += h;
    xm(c) -= h;
    j.col(c) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return j;
}

LmSummary levenberg_marquardt(const LmProblem& problem, Eigen::VectorXd x,
                              const LmOptions& options) {
  if (!problem.residuals) throw DomainError("levenberg_marquardt: no residual function");
  const auto n = x.size();
  const auto jac = [&](const Eigen::VectorXd& p) {
    return masked(problem.jacobian ? problem.jacobian(p)
                                   : finite_difference_jacobian(problem.residuals, p),
                  problem.fixed);
  };
  const auto clamp = [&](Eigen::VectorXd& p, std::vector<bool>& hit) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (flag(problem.nonnegative, i) && p(i) < 0.0) {
        p(i) = 0.0;
        hit[static_cast<std::size_t>(i)] = true;
      }
    }
  };

  LmSummary s;
  s.at_bound.assign(static_cast<std::size_t>(n), false);
  clamp(x, s.at_bound);
  Eigen::VectorXd r = problem.residuals(x);
  Eigen::MatrixXd j = jac(x);
  double cost = 0.5 * r.squaredNorm();
  double lambda = options.initial_damping;

  for (s.iterations = 0; s.iterations < options.max_iterations; ++s.iterations) {
    const Eigen::VectorXd g = j.transpose() * r;
    if (g.norm() < options.gradient_tolerance * (1.0 + cost) ||
        orthogonality(j, r) < options.orthogonality_tolerance) {
      s.converged = true;
      break;
    }
    const Eigen::MatrixXd jtj = j.transpose() * j;
    bool accepted = false;
    bool stationary = false;
    while (!accepted) {
      Eigen::MatrixXd a = jtj;
      for (Eigen::Index i = 0; i < n; ++i) {
        // Marquardt scaling; identity rows keep fixed parameters pinned.
        a(i, i) = jtj(i, i) > 0.0 ? jtj(i, i) * (1.0 + lambda) : 1.0;
      }
      const Eigen::VectorXd step = a.ldlt().solve(-g);
      Eigen::VectorXd trial = x + step;
      std::vector<bool> hit(static_cast<std::size_t>(n), false);
      clamp(trial, hit);
      const Eigen::VectorXd r_trial = problem.residuals(trial);
      const double cost_trial = 0.5 * r_trial.squaredNorm();
      if (std::isfinite(cost_trial) && cost_trial <= cost) {
        const double rel_step = (trial - x).norm() / (x.norm() + options.step_tolerance);
        stationary = rel_step < options.step_tolerance || cost_trial == cost;
        x = trial;
        r = r_trial;
        cost = cost_trial;
        s.at_bound = hit;
        lambda = std::max(lambda / options.damping_factor, 1e-15);
        accepted = true;
      } else {
        lambda *= options.damping_factor;
        if (lambda > 1e16) {
          stationary = true;
          break;
        }
      }
    }
    if (accepted) j = jac(x);
    if (stationary) {
      const Eigen::VectorXd g_final = j.transpose() * r;
      // No further descent is possible in floating point; accept the point if
      // the gradient is at the round-off floor of J^T r or what is left to gain
      // is below the resolution of the cost itself.
      const double floor = 1e3 * std::numeric_limits<double>::epsilon() *
                           j.norm() * (r.norm() + 1.0);
      s.converged = g_final.norm() < std::max(options.gradient_tolerance * (1.0 + cost), floor) ||
                    orthogonality(j, r) < options.orthogonality_tolerance ||
                    predicted_reduction(j, g_final) <= options.cost_tolerance * cost;
      ++s.iterations;
      break;
    }
  }

  s.params = x;
  s.residuals = r;
  s.jacobian = j;
  s.cost = cost;
  s.gradient_norm = (j.transpose() * r).norm();
  return s;
}

Eigen::MatrixXd residual_scaled_covariance(const LmSummary& summary,
                                           const std::vector<bool>& fixed) {
  const auto n = summary.params.size();
  std::vector<Eigen::Index> free;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!flag(fixed, i)) free.push_back(i);
  }
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
  const auto m = static_cast<Eigen::Index>(free.size());
  const auto dof = summary.residuals.size() - m;
  if (m == 0 || dof <= 0) return cov;

  Eigen::MatrixXd jf(summary.jacobian.rows(), m);
  for (Eigen::Index k = 0; k < m; ++k) jf.col(k) = summary.jacobian.col(free[k]);
  const double s2 = summary.residuals.squaredNorm() / static_cast<double>(dof);
  const Eigen::MatrixXd info = jf.transpose() * jf;
  const Eigen::MatrixXd inv = info.completeOrthogonalDecomposition().pseudoInverse();
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) cov(free[a], free[b]) = s2 * inv(a, b);
  }
  return 0.5 * (cov + cov.transpose());
}

}  // namespace saweit
