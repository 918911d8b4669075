#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

namespace dcx::detail {

/// Shortest round-trip decimal form, so equal doubles always print the same
/// bytes.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

/// RFC-4180 quoting, applied only when the field needs it.
inline std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace dcx::detail
