#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sv2svt/lyric_fit.hpp"
#include "sv2svt/melody.hpp"
#include "sv2svt/note_timing.hpp"
#include "sv2svt/timecode.hpp"

namespace sv2svt {

inline constexpr std::string_view kSchemaVersion = "1";

std::string_view tool_version() noexcept;

struct ProjectMetadata {
  std::string source_text;
  std::string target_text;
  std::string tool_version;

  friend bool operator==(const ProjectMetadata&, const ProjectMetadata&) = default;
};

/// The synthesizer-ready result: every note at the base pitch, melody as a
/// deviation curve.
struct SynthProject {
  int base_pitch = kBasePitch;
  std::vector<SyllableNote> notes;
  DeviationCurve deviation;
  ProjectMetadata metadata;

  friend bool operator==(const SynthProject&, const SynthProject&) = default;
};

/// Throws SchemaError naming the first offending field.
void validate_project(const SynthProject& project);

/// Canonical JSON: sorted keys, two-space indent, six-decimal time strings,
/// UTF-8, LF line endings, trailing newline. Validates first.
std::string write_project(const SynthProject& project);
SynthProject parse_project(std::string_view document);

// --- transcript (transcribe stage output) ----------------------------------

struct TranscriptLine {
  std::string text;
  Micros start;
  Micros end;
};

struct Transcript {
  std::vector<TranscriptLine> lines;

  /// Words of every line in order; a word's position is its word_index.
  std::vector<std::string> words() const;

  /// [first, last) word_index range of each line.
  std::vector<std::pair<std::size_t, std::size_t>> line_word_ranges() const;
};

/// Lines must satisfy start <= end and not start before the previous line ends.
Transcript parse_transcript(std::string_view document);
std::string write_transcript(const Transcript& transcript);

// --- translation candidates (translate stage output) -----------------------

struct CandidateSet {
  std::size_t target_syllables = 0;
  std::vector<TranslationCandidate> candidates;
};

CandidateSet parse_candidates(std::string_view document);
std::string write_candidates(const CandidateSet& set);

// --- core stage outputs -----------------------------------------------------

/// Notes array as used in the project document; lyric omitted when unset.
std::string write_notes(std::span<const SyllableNote> notes);
std::vector<SyllableNote> parse_notes(std::string_view document);

std::string write_deviation(const DeviationCurve& curve);
DeviationCurve parse_deviation(std::string_view document);

std::string write_fit_result(const FitResult& fit);

// --- validation -------------------------------------------------------------

enum class InterchangeFormat {
  kTranscript,
  kLabels,
  kContour,
  kCandidates,
  kReadings,
  kNotes,
  kProject,
};

std::string_view to_string(InterchangeFormat format) noexcept;
bool parse_format(std::string_view name, InterchangeFormat& out) noexcept;

/// Parses `content` as `format`, throwing the format's error on failure.
void validate_document(InterchangeFormat format, std::string_view content);

}  // namespace sv2svt
