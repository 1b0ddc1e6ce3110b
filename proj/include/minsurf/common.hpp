#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace minsurf {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Vec3c = Eigen::Vector3cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

enum class ErrorCode {
  NoConvergence,
  AtBranchPoint,
  PathTooCoarse,
  SheetJump,
  NotNormalized,
  Unsupported,
  NotSquarefree,
  DegenerateGauss,
  CountMismatch,
  SignatureMismatch,
  PathThroughPole,
  AtPole,
  SingularAPeriods,
  SingularJacobian,
  ValidationRegression,
  OutOfRange,
  SolverDivergence,
  SearchExhausted,
  InvalidArgument,
  Parse,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` tells the failure apart.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace minsurf
