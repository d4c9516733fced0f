#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ascg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VertexId = std::int64_t;

/// Row activity tolerance used when none is given explicitly.
inline constexpr double kActivityTol = 1e-9;

enum class ErrorCode {
    InvalidArgument,
    DimensionMismatch,
    DimensionCapExceeded,
    UnboundedSet,
    EmptySet,
    InfeasiblePoint,
    DegeneratePolytope,
    NonFinite,
    MissingSmoothnessInfo,
    StallDetected,
    SingletonAway,
    ZeroDirection,
    AscentDirection,
    InconsistentState,
    SingularSolve,
    TooManyRows,
    NonUniqueOptimum,
    PremiseSamplingFailed,
    BoundViolated,
    OutOfScope,
    ParseError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require_dim(Eigen::Index got, Eigen::Index expected, const char* what) {
    if (got != expected) {
        fail(ErrorCode::DimensionMismatch, std::string(what) + ": expected dimension " +
                                               std::to_string(expected) + ", got " +
                                               std::to_string(got));
    }
}

} // namespace ascg
