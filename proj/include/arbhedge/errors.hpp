#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace arbhedge {

enum class ErrorCode {
    InvalidArgument,
    NoSolution,
    IterLimit,
    PicardDiverged,
    NonFinite,
    NotConverged,
    NoCrossing,
    OutOfCorridor,
    SharpeGapZero,
    EmptyCurve,
    ConfigInvalid,
};

/// Stable upper-case name used in reports and CLI output (e.g. "PICARD_DIVERGED").
constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::NoSolution: return "NO_SOLUTION";
    case ErrorCode::IterLimit: return "ITER_LIMIT";
    case ErrorCode::PicardDiverged: return "PICARD_DIVERGED";
    case ErrorCode::NonFinite: return "NONFINITE";
    case ErrorCode::NotConverged: return "NOT_CONVERGED";
    case ErrorCode::NoCrossing: return "NO_CROSSING";
    case ErrorCode::OutOfCorridor: return "OUT_OF_CORRIDOR";
    case ErrorCode::SharpeGapZero: return "SHARPE_GAP_ZERO";
    case ErrorCode::EmptyCurve: return "EMPTY_CURVE";
    case ErrorCode::ConfigInvalid: return "CONFIG_INVALID";
    }
    return "UNKNOWN";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw Error(ErrorCode::InvalidArgument, what);
}

}  // namespace arbhedge
