#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ucpd {

enum class ErrorCode {
  UnknownKernel,
  SampleTooSmall,
  NonFiniteValue,
  DegenerateVariance,
  NonpositiveSigma,
  MissingAnalyticProjection,
  BadParams,
  BadGrid,
  LawMismatch,
  ParseError,
  TooFewObservations,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. The code identifies the failure class; the message
/// carries detail (line numbers, offending values).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Thrown by ingest with the 1-based line that failed to parse.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& content)
      : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": '" + content + "'"),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace ucpd
