#include "minsurf/newton.hpp"

#include <cmath>
#include <limits>

#include "minsurf/common.hpp"

namespace minsurf {

Eigen::MatrixXd finite_difference_jacobian(const ResidualMap& F, const Eigen::VectorXd& x, double step) {
  Eigen::MatrixXd J;
  Eigen::VectorXd xp = x, xm = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = step * (1.0 + std::abs(x(i)));
    xp(i) = x(i) + h;
    xm(i) = x(i) - h;
    const Eigen::VectorXd column = (F(xp) - F(xm)) / (2.0 * h);
    if (J.size() == 0) J.resize(column.size(), x.size());
    J.col(i) = column;
    xp(i) = xm(i) = x(i);
  }
  return J;
}

double condition_number(const Eigen::MatrixXd& J) {
  if (J.size() == 0) return std::numeric_limits<double>::infinity();
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(J).singularValues();
  const double smin = s(s.size() - 1);
  return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

NewtonResult newton_solve(const ResidualMap& F, Eigen::VectorXd x0, const NewtonOptions& opt) {
  NewtonResult out;
  out.x = std::move(x0);
  Eigen::VectorXd r = F(out.x);
  out.residual = r.norm();
  if (!std::isfinite(out.residual)) throw Error(ErrorCode::NoConvergence, "residual is not finite at the initial point");

  for (int it = 1; out.residual > opt.tolerance; ++it) {
    if (it > opt.max_iterations)
      throw Error(ErrorCode::NoConvergence, "Newton iteration limit reached, residual " + std::to_string(out.residual));
    const Eigen::MatrixXd J = finite_difference_jacobian(F, out.x, opt.fd_step);
    if (it == 1 && condition_number(J) >= opt.max_condition)
      throw Error(ErrorCode::SingularJacobian, "initial Jacobian is singular or ill-conditioned");
    Eigen::VectorXd dx = -Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(J).solve(r);
    if (const double len = dx.norm(); len > opt.max_step) dx *= opt.max_step / len;

    // Armijo on phi = |F|^2 / 2 along the Newton direction, whose slope is -|F|^2.
    const double phi = 0.5 * out.residual * out.residual;
    double t = 1.0;
    Eigen::VectorXd x_new, r_new;
    for (;; t *= 0.5) {
      if (t < 1e-12) throw Error(ErrorCode::NoConvergence, "line search failed to decrease the residual");
      x_new = out.x + t * dx;
      r_new = F(x_new);
      const double phi_new = 0.5 * r_new.squaredNorm();
      if (std::isfinite(phi_new) && phi_new <= (1.0 - 2e-4 * t) * phi) break;
    }
    out.x = std::move(x_new);
    r = std::move(r_new);
    out.residual = r.norm();
    out.iterations = it;
    const NewtonStep step{it, out.residual, t * dx.norm()};
    out.history.push_back(step);
    if (opt.log) opt.log(step);
  }
  return out;
}

}  // namespace minsurf
