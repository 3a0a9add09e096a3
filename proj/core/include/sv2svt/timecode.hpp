#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sv2svt {

/// A time point or span in whole microseconds. Interchange formats write
/// seconds with exactly six decimals.
class Micros {
 public:
  constexpr Micros() = default;
  constexpr explicit Micros(std::int64_t count) : count_(count) {}

  constexpr std::int64_t count() const noexcept { return count_; }
  constexpr double seconds() const noexcept {
    return static_cast<double>(count_) / 1e6;
  }

  /// Nearest microsecond to `seconds`.
  static Micros from_seconds(double seconds);

  friend constexpr auto operator<=>(Micros, Micros) = default;
  friend constexpr Micros operator+(Micros a, Micros b) {
    return Micros(a.count_ + b.count_);
  }
  friend constexpr Micros operator-(Micros a, Micros b) {
    return Micros(a.count_ - b.count_);
  }

 private:
  std::int64_t count_ = 0;
};

/// Parses a decimal seconds string ("1", "0.25", "-0.000001") with at most
/// six fractional digits. Returns nullopt on any other syntax.
std::optional<Micros> parse_seconds(std::string_view text);

/// Fixed six-decimal rendering, e.g. Micros(100000) -> "0.100000".
std::string format_seconds(Micros t);

}  // namespace sv2svt
