#include "ascg/common.hpp"

namespace ascg {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DimensionCapExceeded: return "DimensionCapExceeded";
    case ErrorCode::UnboundedSet: return "UnboundedSet";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::InfeasiblePoint: return "InfeasiblePoint";
    case ErrorCode::DegeneratePolytope: return "DegeneratePolytope";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::MissingSmoothnessInfo: return "MissingSmoothnessInfo";
    case ErrorCode::StallDetected: return "StallDetected";
    case ErrorCode::SingletonAway: return "SingletonAway";
    case ErrorCode::ZeroDirection: return "ZeroDirection";
    case ErrorCode::AscentDirection: return "AscentDirection";
    case ErrorCode::InconsistentState: return "InconsistentState";
    case ErrorCode::SingularSolve: return "SingularSolve";
    case ErrorCode::TooManyRows: return "TooManyRows";
    case ErrorCode::NonUniqueOptimum: return "NonUniqueOptimum";
    case ErrorCode::PremiseSamplingFailed: return "PremiseSamplingFailed";
    case ErrorCode::BoundViolated: return "BoundViolated";
    case ErrorCode::OutOfScope: return "OutOfScope";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

} // namespace ascg
