#pragma once

#include <charconv>
#include <string>

namespace mvtm::detail {

// Shortest decimal form that round-trips the exact double.
inline std::string format_double(double value) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace mvtm::detail
