#pragma once

#include <stdexcept>
#include <string>

namespace nsamg {

enum class ErrorCode {
    NonFinite,
    SingularInput,
    NotSpd,
    DimensionMismatch,
    TooLarge,
    ParseError,
    UnsupportedField,
    ZeroDiagonal,
    InvalidSpec,
    SingularRow,
    SingularCoarseOperator,
    RankDeficientP,
    DegenerateBlock,
    DeterminantCondition,
    InvalidBeta,
    TrivialProjection,
    TooFewIterations,
    Stagnation,
    ConfigError,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::SingularInput: return "SingularInput";
        case ErrorCode::NotSpd: return "NotSpd";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::UnsupportedField: return "UnsupportedField";
        case ErrorCode::ZeroDiagonal: return "ZeroDiagonal";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::SingularRow: return "SingularRow";
        case ErrorCode::SingularCoarseOperator: return "SingularCoarseOperator";
        case ErrorCode::RankDeficientP: return "RankDeficientP";
        case ErrorCode::DegenerateBlock: return "DegenerateBlock";
        case ErrorCode::DeterminantCondition: return "DeterminantCondition";
        case ErrorCode::InvalidBeta: return "InvalidBeta";
        case ErrorCode::TrivialProjection: return "TrivialProjection";
        case ErrorCode::TooFewIterations: return "TooFewIterations";
        case ErrorCode::Stagnation: return "Stagnation";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

} // namespace nsamg
