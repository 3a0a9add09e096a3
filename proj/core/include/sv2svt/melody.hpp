#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sv2svt/timecode.hpp"

namespace sv2svt {

/// MIDI pitch every note is placed at; the melody rides on top as deviation.
inline constexpr int kBasePitch = 60;

struct PitchFrame {
  Micros time;
  double f0_hz = 0.0;  // 0 = unvoiced

  bool voiced() const noexcept { return f0_hz > 0.0; }
};

struct DeviationPoint {
  Micros time;
  double semitones = 0.0;

  friend bool operator==(const DeviationPoint&, const DeviationPoint&) = default;
};

/// Semitone offsets from kBasePitch. Between points the value holds (step).
struct DeviationCurve {
  std::vector<DeviationPoint> points;

  /// Value of the last point at or before `t`; the first point's value
  /// before the curve starts. 0 for an empty curve.
  double value_at(Micros t) const noexcept;

  friend bool operator==(const DeviationCurve&, const DeviationCurve&) = default;
};

/// Parses `time_s,f0_hz` lines (optional header). Times are rounded to the
/// microsecond. Output is sorted with exact duplicates removed; a repeated
/// time with a different frequency is an error.
std::vector<PitchFrame> parse_contour(std::string_view text);

std::string write_contour(std::span<const PitchFrame> frames);

/// Equal-tempered MIDI pitch, A4 = 440 Hz = 69. Throws DomainError for f0 <= 0.
double hz_to_midi(double f0_hz);
double midi_to_hz(double midi);

/// Running median over voiced frames in the MIDI domain. Window must be
/// odd; 1 (or 0) returns the input unchanged. Unvoiced frames stay unvoiced
/// and are not counted inside the window.
std::vector<PitchFrame> median_smooth(std::span<const PitchFrame> frames, std::size_t window);

/// One point per voiced frame at hz_to_midi(f0) - 60. Unvoiced frames add
/// no point, so the previous voiced value holds across them.
/// Throws EmptyMelodyError when no frame is voiced.
DeviationCurve contour_to_deviation(std::span<const PitchFrame> frames);

}  // namespace sv2svt
