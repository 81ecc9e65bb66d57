#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>

#include "agentopt/errors.hpp"

namespace agentopt {

// All prompt and report rendering goes through these helpers. std::to_chars
// is locale-independent by definition, so the decimal separator is always
// '.' no matter what the process locale says.

/// Fixed-point with exactly `decimals` digits after the point.
inline std::string format_fixed(double v, int decimals) {
  char buf[64];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, decimals);
  if (ec != std::errc{}) throw ArgumentError("format_fixed: value out of range");
  return std::string(buf, ptr);
}

/// Fixed-point with trailing zeros removed but at least one decimal kept,
/// e.g. 1.1000 -> "1.1", 1.0 -> "1.0", 0.75 -> "0.75".
inline std::string format_trimmed(double v, int max_decimals) {
  std::string s = format_fixed(v, max_decimals);
  const auto dot = s.find('.');
  if (dot == std::string::npos) return s;
  auto end = s.size();
  while (end > dot + 2 && s[end - 1] == '0') --end;
  s.resize(end);
  return s;
}

/// Shortest representation that round-trips.
inline std::string format_shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw ArgumentError("format_shortest: value out of range");
  return std::string(buf, ptr);
}

/// Parses one real number. Rejects trailing junk inside the token, empty
/// tokens and non-finite results.
inline double parse_real(std::string_view tok) {
  double out = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last)
    throw ParseError("not a real number: '" + std::string(tok) + "'", std::string(tok));
  if (!std::isfinite(out))
    throw ParseError("non-finite number: '" + std::string(tok) + "'", std::string(tok));
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

}  // namespace agentopt
