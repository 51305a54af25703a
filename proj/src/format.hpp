#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace gsync::detail {

// Nine significant digits, the precision of every CSV column we write.
inline std::string format_sig9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Shortest representation that parses back to the same double.
inline std::string format_roundtrip(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : format_sig9(v);
}

}  // namespace gsync::detail
