#include "minsurf/common.hpp"

namespace minsurf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::AtBranchPoint: return "AtBranchPoint";
    case ErrorCode::PathTooCoarse: return "PathTooCoarse";
    case ErrorCode::SheetJump: return "SheetJump";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::NotSquarefree: return "NotSquarefree";
    case ErrorCode::DegenerateGauss: return "DegenerateGauss";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::SignatureMismatch: return "SignatureMismatch";
    case ErrorCode::PathThroughPole: return "PathThroughPole";
    case ErrorCode::AtPole: return "AtPole";
    case ErrorCode::SingularAPeriods: return "SingularAPeriods";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::ValidationRegression: return "ValidationRegression";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::SolverDivergence: return "SolverDivergence";
    case ErrorCode::SearchExhausted: return "SearchExhausted";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace minsurf
