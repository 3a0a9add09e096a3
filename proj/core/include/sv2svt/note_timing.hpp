#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sv2svt/phonology.hpp"
#include "sv2svt/timecode.hpp"

namespace sv2svt {

/// One aligner output row.
struct TimedPhoneme {
  Phoneme phoneme;
  Micros start;
  Micros end;
  std::size_t word_index = 0;
};

/// A `SIL` row: a stretch the aligner marked as silence.
struct GapMarker {
  Micros start;
  Micros end;
};

struct TimedLabels {
  std::vector<TimedPhoneme> phonemes;
  std::vector<GapMarker> gaps;
};

/// Parses the timed-label TSV: `start_s<TAB>end_s<TAB>phoneme<TAB>word_index`.
/// Rows must be sorted by start time and must not overlap.
TimedLabels parse_timed_labels(std::string_view text);

std::string write_timed_labels(const TimedLabels& labels);

struct SyllableNote {
  Micros onset;
  Micros duration;
  Syllable syllable;
  std::size_t word_index = 0;
  std::optional<std::string> lyric;
  /// Set when a vowel-less word was folded into this note.
  bool vowelless_merged = false;

  Micros end() const { return onset + duration; }

  friend bool operator==(const SyllableNote&, const SyllableNote&) = default;
};

/// Syllabification of one aligned word. A word without any vowel keeps its
/// phonemes in `vowelless` and has no syllables.
struct WordSyllables {
  std::size_t word_index = 0;
  std::vector<Syllable> syllables;
  std::vector<Phoneme> vowelless;
};

/// Groups aligned phonemes by word (in order of first appearance) and
/// syllabifies each word from the aligner's own phonemes.
std::vector<WordSyllables> syllabify_aligned_words(std::span<const TimedPhoneme> timed);

/// One note per syllable: onset is the start of the syllable's first
/// phoneme, duration runs to the end of its last phoneme.
///
/// A vowel-less word is folded into the first note of the following word,
/// or into the last note of the preceding word when nothing follows.
/// Throws MismatchError when a word's aligned phonemes differ from its
/// syllabification (stress digits ignored).
std::vector<SyllableNote> build_notes(std::span<const TimedPhoneme> timed,
                                      std::span<const WordSyllables> words);

}  // namespace sv2svt
