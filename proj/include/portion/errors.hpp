#pragma once

#include <stdexcept>
#include <string>

namespace portion {

enum class ErrorCode {
    EmptyMedian,
    MedianMismatch,
    NoRoot,
    NegativeRoot,
    DimensionMismatch,
    BadIndex,
    EmptyInstance,
    BadPairContext,
    NoExpectation,
    PhantomNoRoot,
    ParseError,
    InvalidArgument,
    Internal,
};

/// Library-wide exception; `code` identifies the contract that was violated.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

inline const char* to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::EmptyMedian: return "EmptyMedian";
        case ErrorCode::MedianMismatch: return "MedianMismatch";
        case ErrorCode::NoRoot: return "NoRoot";
        case ErrorCode::NegativeRoot: return "NegativeRoot";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::BadIndex: return "BadIndex";
        case ErrorCode::EmptyInstance: return "EmptyInstance";
        case ErrorCode::BadPairContext: return "BadPairContext";
        case ErrorCode::NoExpectation: return "NoExpectation";
        case ErrorCode::PhantomNoRoot: return "PhantomNoRoot";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

}  // namespace portion
