#pragma once

#include <string>
#include <string_view>

namespace logens {

/// Shortest text form of a double that parses back bit-for-bit.
/// Infinities print as `inf` / `-inf`.
std::string format_real(double value);

/// Parses a whole field as a double; throws std::invalid_argument otherwise.
double parse_real(std::string_view text);

}  // namespace logens
