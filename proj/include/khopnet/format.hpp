#pragma once

#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace khopnet {

/// Shortest decimal text that parses back to exactly `value`.
inline std::string format_shortest(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

/// Dump-style number: shortest round-trip digits, fixed notation down to 1e-4
/// and scientific below it (0.000217865, 7.30846e-05).
inline std::string format_dump_number(double value) {
  char buf[64];
  const double mag = std::fabs(value);
  const auto fmt = (value == 0.0 || mag >= 1e-4) ? std::chars_format::fixed
                                                 : std::chars_format::scientific;
  auto res = std::to_chars(buf, buf + sizeof buf, value, fmt);
  return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view text) {
  double value = 0.0;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view text) {
  Int value{};
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

}  // namespace khopnet
