#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sv2svt/interchange.hpp"

namespace sv2svt {

enum class UstEncoding { kUtf8, kShiftJis };

struct UstOptions {
  double tempo_bpm = 120.0;
  int tick_resolution = 480;  // ticks per quarter note
  UstEncoding encoding = UstEncoding::kUtf8;
  std::string project_name = "sv2svt";
};

struct UstExport {
  std::string text;  // encoded bytes, CRLF line endings
  std::vector<std::string> warnings;
};

/// round(duration_s * tempo_bpm / 60 * tick_resolution), without clamping.
std::int64_t duration_to_ticks(Micros duration, double tempo_bpm, int tick_resolution);

/// Spacing of exported pitch-bend points, in ticks.
inline constexpr int kPitchBendIntervalTicks = 5;

/// UTAU-style note list. Every note sits at NoteNum 60; silences become
/// "R" rests; the deviation curve becomes per-note PitchBend lists in cents
/// sampled every kPitchBendIntervalTicks with step-hold. Notes shorter than
/// one tick are clamped to one tick with a warning.
UstExport export_ust(const SynthProject& project, const UstOptions& options);

}  // namespace sv2svt
