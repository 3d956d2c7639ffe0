#pragma once

#include <stdexcept>
#include <string>

namespace specrag {

enum class ErrorCode {
    EmptyDocument,
    EmptyInput,
    EmptyText,
    InvalidConfig,
    DimensionMismatch,
    DuplicateChunkId,
    EmptyIndex,
    IoError,
    FormatVersionMismatch,
    ChecksumMismatch,
    Timeout,
    BadStatus,
    MalformedResponse,
    ShapeMismatch,
    CausalityViolation,
    InadmissibleConfig,
    ContextOverflow,
    UnparsableAnswer,
    SchemaError,
};

const char* error_code_name(ErrorCode code);

/// Single exception type for the whole library; the code identifies the
/// failure class so callers can branch without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace specrag
