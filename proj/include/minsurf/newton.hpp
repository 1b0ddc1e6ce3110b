#pragma once

#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace minsurf {

using ResidualMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct NewtonStep {
  int iteration = 0;
  double residual = 0.0;
  double step_length = 0.0;
};

struct NewtonOptions {
  double tolerance = 1e-10;
  int max_iterations = 100;
  /// Central differences with step fd_step * (1 + |x_i|).
  double fd_step = 1e-6;
  double max_condition = 1e8;
  /// Newton steps longer than this are scaled back before the line search.
  double max_step = std::numeric_limits<double>::infinity();
  /// Called once per accepted iteration.
  std::function<void(const NewtonStep&)> log;
};

struct NewtonResult {
  Eigen::VectorXd x;
  double residual = 0.0;
  int iterations = 0;
  std::vector<NewtonStep> history;
};

Eigen::MatrixXd finite_difference_jacobian(const ResidualMap& F, const Eigen::VectorXd& x, double step = 1e-6);

/// Ratio of extreme singular values over the min(rows, cols) leading ones.
double condition_number(const Eigen::MatrixXd& J);

/// Damped Newton with Armijo backtracking on |F|^2 and minimum-norm steps, so
/// under- and overdetermined systems are both accepted. Throws
/// SingularJacobian when the initial Jacobian is too ill-conditioned and
/// NoConvergence after max_iterations or a failed line search.
NewtonResult newton_solve(const ResidualMap& F, Eigen::VectorXd x0, const NewtonOptions& opt = {});

}  // namespace minsurf
