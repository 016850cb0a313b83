#include "susbam/error.hpp"

namespace susbam {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NotWav: return "NotWav";
        case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
        case ErrorCode::TruncatedFile: return "TruncatedFile";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::BadChannel: return "BadChannel";
        case ErrorCode::BadCutoff: return "BadCutoff";
        case ErrorCode::BadTaps: return "BadTaps";
        case ErrorCode::RateMismatch: return "RateMismatch";
        case ErrorCode::EmptySignal: return "EmptySignal";
        case ErrorCode::BadAlpha: return "BadAlpha";
        case ErrorCode::BadRate: return "BadRate";
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
        case ErrorCode::SignalTooShort: return "SignalTooShort";
        case ErrorCode::BadBand: return "BadBand";
        case ErrorCode::NoRoom: return "NoRoom";
        case ErrorCode::RateTooLow: return "RateTooLow";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

ParseError::ParseError(std::size_t row, std::size_t column, const std::string& message)
    : Error(ErrorCode::ParseError,
            "row " + std::to_string(row) + ", column " + std::to_string(column) + ": " + message),
      row_(row),
      column_(column) {}

}  // namespace susbam
