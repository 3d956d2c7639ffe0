#include "specrag/error.hpp"

namespace specrag {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DuplicateChunkId: return "DuplicateChunkId";
    case ErrorCode::EmptyIndex: return "EmptyIndex";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::FormatVersionMismatch: return "FormatVersionMismatch";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::BadStatus: return "BadStatus";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::CausalityViolation: return "CausalityViolation";
    case ErrorCode::InadmissibleConfig: return "InadmissibleConfig";
    case ErrorCode::ContextOverflow: return "ContextOverflow";
    case ErrorCode::UnparsableAnswer: return "UnparsableAnswer";
    case ErrorCode::SchemaError: return "SchemaError";
    }
    return "UnknownError";
}

} // namespace specrag
