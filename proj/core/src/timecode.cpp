#include "sv2svt/timecode.hpp"

#include <cmath>
#include <cstdio>

namespace sv2svt {

Micros Micros::from_seconds(double seconds) {
  return Micros(static_cast<std::int64_t>(std::llround(seconds * 1e6)));
}

std::optional<Micros> parse_seconds(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  const std::string_view whole = text.substr(0, dot);
  const std::string_view frac =
      dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (whole.empty() && frac.empty()) return std::nullopt;
  if (dot != std::string_view::npos && frac.empty()) return std::nullopt;
  if (frac.size() > 6 || whole.size() > 12) return std::nullopt;

  std::int64_t value = 0;
  for (char c : whole) {
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + (c - '0');
  }
  std::int64_t fraction = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    char c = i < frac.size() ? frac[i] : '0';
    if (c < '0' || c > '9') return std::nullopt;
    fraction = fraction * 10 + (c - '0');
  }
  const std::int64_t total = value * 1'000'000 + fraction;
  return Micros(negative ? -total : total);
}

std::string format_seconds(Micros t) {
  std::int64_t us = t.count();
  const bool negative = us < 0;
  if (negative) us = -us;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%s%lld.%06lld", negative ? "-" : "",
                static_cast<long long>(us / 1'000'000),
                static_cast<long long>(us % 1'000'000));
  return buf;
}

}  // namespace sv2svt
