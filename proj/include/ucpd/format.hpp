#pragma once

#include <string>
#include <string_view>

namespace ucpd {

/// Shortest decimal form that reads back to the identical double.
std::string format_real(double value);

/// Inverse of format_real; accepts "inf", "-inf" and "nan". Throws ParseError
/// with line 0 on malformed input.
double parse_real(std::string_view text);

}  // namespace ucpd
