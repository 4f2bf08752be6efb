#pragma once

#include <stdexcept>
#include <string>

namespace qdiv {

enum class ErrorCode {
    NotHermitian,
    NotPositive,
    TraceNotOne,
    ConvergenceFailure,
    SingularSupport,
    DimensionMismatch,
    SupportViolation,
    IndexMismatch,
    NotRankOneFamily,
    InvalidProjectorFamily,
    InvalidEntropicIndex,
    NonPositiveArgument,
    BadRank,
    BadPartition,
    BadTrialConfig,
    BadArgument,
    ParseError,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::NotPositive: return "NotPositive";
        case ErrorCode::TraceNotOne: return "TraceNotOne";
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::SingularSupport: return "SingularSupport";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::SupportViolation: return "SupportViolation";
        case ErrorCode::IndexMismatch: return "IndexMismatch";
        case ErrorCode::NotRankOneFamily: return "NotRankOneFamily";
        case ErrorCode::InvalidProjectorFamily: return "InvalidProjectorFamily";
        case ErrorCode::InvalidEntropicIndex: return "InvalidEntropicIndex";
        case ErrorCode::NonPositiveArgument: return "NonPositiveArgument";
        case ErrorCode::BadRank: return "BadRank";
        case ErrorCode::BadPartition: return "BadPartition";
        case ErrorCode::BadTrialConfig: return "BadTrialConfig";
        case ErrorCode::BadArgument: return "BadArgument";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace qdiv
