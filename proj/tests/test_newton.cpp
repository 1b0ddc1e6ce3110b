#include <doctest.h>

#include <cmath>

#include "minsurf/common.hpp"
#include "minsurf/newton.hpp"

using namespace minsurf;
using Eigen::VectorXd;

TEST_CASE("finite-difference Jacobian of a polynomial map") {
  const ResidualMap F = [](const VectorXd& x) {
    VectorXd r(2);
    r << x(0) * x(0) * x(1), std::sin(x(0)) + x(1) * x(1) * x(1);
    return r;
  };
  const VectorXd x = (VectorXd(2) << 0.7, -1.3).finished();
  Eigen::MatrixXd exact(2, 2);
  exact << 2.0 * x(0) * x(1), x(0) * x(0), std::cos(x(0)), 3.0 * x(1) * x(1);
  CHECK((finite_difference_jacobian(F, x) - exact).norm() < 1e-8);
}

TEST_CASE("condition number") {
  CHECK(condition_number(Eigen::Matrix2d::Identity()) == doctest::Approx(1.0));
  CHECK(condition_number(Eigen::Vector2d(1e-3, 1.0).asDiagonal().toDenseMatrix()) == doctest::Approx(1e3));
  Eigen::MatrixXd wide(1, 3);
  wide << 0.0, 3.0, 4.0;
  CHECK(condition_number(wide) == doctest::Approx(1.0));
}

TEST_CASE("Newton on a square system") {
  // Intersection of the unit circle with the line x = y.
  const ResidualMap F = [](const VectorXd& x) {
    VectorXd r(2);
    r << x.squaredNorm() - 1.0, x(0) - x(1);
    return r;
  };
  std::vector<NewtonStep> logged;
  NewtonOptions opt;
  opt.log = [&](const NewtonStep& s) { logged.push_back(s); };
  const NewtonResult r = newton_solve(F, (VectorXd(2) << 2.0, 0.5).finished(), opt);
  CHECK(std::abs(r.x(0) - std::sqrt(0.5)) < 1e-10);
  CHECK(std::abs(r.x(1) - std::sqrt(0.5)) < 1e-10);
  CHECK(r.residual <= 1e-10);
  REQUIRE(logged.size() == r.history.size());
  for (std::size_t k = 1; k < r.history.size(); ++k) CHECK(r.history[k].residual < r.history[k - 1].residual);

  // Same start, same answer to the last bit.
  const NewtonResult again = newton_solve(F, (VectorXd(2) << 2.0, 0.5).finished());
  CHECK((again.x - r.x).norm() == 0.0);
}

TEST_CASE("underdetermined systems take the minimum-norm step") {
  const ResidualMap F = [](const VectorXd& x) { return VectorXd::Constant(1, x(0) + 2.0 * x(1) - 5.0); };
  const NewtonResult r = newton_solve(F, VectorXd::Zero(2));
  CHECK((r.x - Eigen::Vector2d(1.0, 2.0)).norm() < 1e-10);
}

TEST_CASE("solver failures") {
  const ResidualMap flat = [](const VectorXd& x) {
    VectorXd r(2);
    r << x(0) + x(1), 2.0 * (x(0) + x(1)) - 1.0;
    return r;
  };
  try {
    newton_solve(flat, VectorXd::Zero(2));
    FAIL("expected SingularJacobian");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularJacobian);
  }

  // x^2 + 1 has no real root.
  const ResidualMap none = [](const VectorXd& x) { return VectorXd::Constant(1, x(0) * x(0) + 1.0); };
  NewtonOptions opt;
  opt.max_iterations = 20;
  try {
    newton_solve(none, VectorXd::Constant(1, 1.0), opt);
    FAIL("expected NoConvergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoConvergence);
  }
}
