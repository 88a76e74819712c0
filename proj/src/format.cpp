#include "logens/format.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace logens {

std::string format_real(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

double parse_real(std::string_view text) {
  const std::string owned(text);
  if (owned.empty()) throw std::invalid_argument("empty numeric field");
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(owned.c_str(), &end);
  if (end != owned.c_str() + owned.size() || errno == ERANGE)
    throw std::invalid_argument("not a number: '" + owned + "'");
  return value;
}

}  // namespace logens
