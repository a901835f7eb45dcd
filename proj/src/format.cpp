#include "ucpd/format.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "ucpd/errors.hpp"

namespace ucpd {

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

double parse_real(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError(0, std::string(text));
  return value;
}

}  // namespace ucpd

namespace ucpd {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownKernel: return "UnknownKernel";
    case ErrorCode::SampleTooSmall: return "SampleTooSmall";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::NonpositiveSigma: return "NonpositiveSigma";
    case ErrorCode::MissingAnalyticProjection: return "MissingAnalyticProjection";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::BadGrid: return "BadGrid";
    case ErrorCode::LawMismatch: return "LawMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::TooFewObservations: return "TooFewObservations";
    case ErrorCode::IoError: return "IoError";
  }
  return "Error";
}

}  // namespace ucpd
