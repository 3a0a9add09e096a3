#include "sv2svt/melody.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "sv2svt/error.hpp"

namespace sv2svt {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
}

}  // namespace

double DeviationCurve::value_at(Micros t) const noexcept {
  if (points.empty()) return 0.0;
  auto it = std::upper_bound(points.begin(), points.end(), t,
                             [](Micros v, const DeviationPoint& p) { return v < p.time; });
  if (it == points.begin()) return points.front().semitones;
  return std::prev(it)->semitones;
}

std::vector<PitchFrame> parse_contour(std::string_view text) {
  std::vector<PitchFrame> frames;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool first_content = true;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;

    const auto comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw ParseError(line_no, "expected 'time_s,f0_hz'");
    }
    double time = 0.0;
    double f0 = 0.0;
    const bool ok = parse_double(line.substr(0, comma), time) &&
                    parse_double(line.substr(comma + 1), f0);
    if (!ok) {
      if (first_content) {  // header row
        first_content = false;
        continue;
      }
      throw ParseError(line_no, "non-numeric field in '" + std::string(line) + "'");
    }
    first_content = false;
    if (!std::isfinite(time) || !std::isfinite(f0)) throw ParseError(line_no, "non-finite value");
    if (time < 0.0) throw ParseError(line_no, "negative time");
    if (f0 < 0.0) throw ParseError(line_no, "negative frequency");
    frames.push_back({Micros::from_seconds(time), f0});
  }

  std::stable_sort(frames.begin(), frames.end(),
                   [](const PitchFrame& a, const PitchFrame& b) { return a.time < b.time; });
  std::vector<PitchFrame> out;
  out.reserve(frames.size());
  for (const auto& f : frames) {
    if (!out.empty() && out.back().time == f.time) {
      if (out.back().f0_hz != f.f0_hz) {
        throw ParseError(0, "conflicting frequencies at time " + format_seconds(f.time));
      }
      continue;
    }
    out.push_back(f);
  }
  return out;
}

std::string write_contour(std::span<const PitchFrame> frames) {
  std::string out = "time_s,f0_hz\n";
  char buf[64];
  for (const auto& f : frames) {
    std::snprintf(buf, sizeof(buf), "%s,%.17g\n", format_seconds(f.time).c_str(), f.f0_hz);
    out += buf;
  }
  return out;
}

double hz_to_midi(double f0_hz) {
  if (!(f0_hz > 0.0) || !std::isfinite(f0_hz)) {
    throw DomainError("frequency must be positive and finite");
  }
  return 69.0 + 12.0 * std::log2(f0_hz / 440.0);
}

double midi_to_hz(double midi) { return 440.0 * std::exp2((midi - 69.0) / 12.0); }

std::vector<PitchFrame> median_smooth(std::span<const PitchFrame> frames, std::size_t window) {
  std::vector<PitchFrame> out(frames.begin(), frames.end());
  if (window <= 1) return out;
  if (window % 2 == 0) throw DomainError("median window must be odd");

  std::vector<std::size_t> voiced;
  std::vector<double> pitch;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].voiced()) {
      voiced.push_back(i);
      pitch.push_back(hz_to_midi(frames[i].f0_hz));
    }
  }
  const std::size_t half = window / 2;
  std::vector<double> scratch;
  for (std::size_t k = 0; k < voiced.size(); ++k) {
    const std::size_t lo = k >= half ? k - half : 0;
    const std::size_t hi = std::min(voiced.size() - 1, k + half);
    scratch.assign(pitch.begin() + static_cast<std::ptrdiff_t>(lo),
                   pitch.begin() + static_cast<std::ptrdiff_t>(hi + 1));
    const auto mid = scratch.begin() + static_cast<std::ptrdiff_t>(scratch.size() / 2);
    std::nth_element(scratch.begin(), mid, scratch.end());
    double median = *mid;
    if (scratch.size() % 2 == 0) {
      median = (median + *std::max_element(scratch.begin(), mid)) / 2.0;
    }
    out[voiced[k]].f0_hz = midi_to_hz(median);
  }
  return out;
}

DeviationCurve contour_to_deviation(std::span<const PitchFrame> frames) {
  DeviationCurve curve;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& f = frames[i];
    if (i > 0 && !(frames[i - 1].time < f.time)) {
      throw ValidationError("contour frames are not strictly increasing in time");
    }
    if (!f.voiced()) continue;
    curve.points.push_back({f.time, hz_to_midi(f.f0_hz) - kBasePitch});
  }
  if (curve.points.empty()) throw EmptyMelodyError("contour has no voiced frame");
  return curve;
}

}  // namespace sv2svt
