#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace susbam {

enum class ErrorCode {
    // wav-io
    NotWav,
    UnsupportedFormat,
    TruncatedFile,
    IoFailure,
    BadChannel,
    // dsp
    BadCutoff,
    BadTaps,
    RateMismatch,
    EmptySignal,
    BadAlpha,
    BadRate,
    // pipeline
    ConfigInvalid,
    SignalTooShort,
    BadBand,
    NoRoom,
    RateTooLow,
    // data files
    ParseError,
    EmptyInput,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure in the library surfaces as this exception; `code()` tells
/// callers (and the CLI's exit-code mapping) which contract was violated.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// CSV parse failure with a 1-based row (file line) and column (field) position.
class ParseError : public Error {
public:
    ParseError(std::size_t row, std::size_t column, const std::string& message);

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

}  // namespace susbam
