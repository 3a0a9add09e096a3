#include "sv2svt/ust.hpp"

#include <cmath>
#include <cstdio>

#include "sv2svt/error.hpp"
#include "sv2svt/unicode.hpp"

namespace sv2svt {

namespace {

constexpr const char* kEol = "\r\n";

long double ticks_per_microsecond(double tempo_bpm, int tick_resolution) {
  return static_cast<long double>(tempo_bpm) * tick_resolution / 60'000'000.0L;
}

Micros tick_to_time(std::int64_t tick, double tempo_bpm, int tick_resolution) {
  const long double us = tick / ticks_per_microsecond(tempo_bpm, tick_resolution);
  return Micros(static_cast<std::int64_t>(std::llround(us)));
}

std::string block_header(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "[#%04zu]", index);
  return buf;
}

}  // namespace

std::int64_t duration_to_ticks(Micros duration, double tempo_bpm, int tick_resolution) {
  if (!(tempo_bpm > 0.0) || !std::isfinite(tempo_bpm)) {
    throw DomainError("tempo must be positive");
  }
  if (tick_resolution <= 0) throw DomainError("tick resolution must be positive");
  return static_cast<std::int64_t>(
      std::llround(duration.count() * ticks_per_microsecond(tempo_bpm, tick_resolution)));
}

UstExport export_ust(const SynthProject& project, const UstOptions& options) {
  validate_project(project);
  const double bpm = options.tempo_bpm;
  const int res = options.tick_resolution;
  duration_to_ticks(Micros(0), bpm, res);  // validates tempo and resolution

  UstExport result;
  std::string out;
  auto line = [&out](const std::string& s) {
    out += s;
    out += kEol;
  };

  char buf[64];
  line("[#VERSION]");
  line("UST Version1.2");
  line(options.encoding == UstEncoding::kUtf8 ? "Charset=UTF-8" : "Charset=shift_jis");
  line("[#SETTING]");
  std::snprintf(buf, sizeof(buf), "Tempo=%.2f", bpm);
  line(buf);
  line("Tracks=1");
  line("ProjectName=" + options.project_name);

  std::size_t block = 0;
  std::int64_t cursor = 0;
  for (std::size_t i = 0; i < project.notes.size(); ++i) {
    const auto& note = project.notes[i];
    const std::int64_t onset_tick = duration_to_ticks(note.onset, bpm, res);
    if (onset_tick > cursor) {
      line(block_header(block++));
      line("Length=" + std::to_string(onset_tick - cursor));
      line("Lyric=R");
      line("NoteNum=" + std::to_string(kBasePitch));
      line("PreUtterance=");
      cursor = onset_tick;
    }

    std::int64_t length = duration_to_ticks(note.duration, bpm, res);
    if (length < 1) {
      result.warnings.push_back("note " + std::to_string(i) + " at " +
                                format_seconds(note.onset) +
                                "s is shorter than one tick; clamped to 1 tick");
      length = 1;
    }

    std::string bend;
    for (std::int64_t t = 0; t < length; t += kPitchBendIntervalTicks) {
      const double semis = project.deviation.value_at(tick_to_time(cursor + t, bpm, res));
      if (!bend.empty()) bend += ',';
      bend += std::to_string(std::llround(semis * 100.0));
    }

    line(block_header(block++));
    line("Length=" + std::to_string(length));
    line("Lyric=" + *note.lyric);
    line("NoteNum=" + std::to_string(kBasePitch));
    line("PreUtterance=");
    line("PBType=5");
    line("PBStart=0");
    line("PitchBend=" + bend);
    cursor += length;
  }
  line("[#TRACKEND]");

  result.text = options.encoding == UstEncoding::kUtf8 ? std::move(out) : unicode::to_shift_jis(out);
  return result;
}

}  // namespace sv2svt
