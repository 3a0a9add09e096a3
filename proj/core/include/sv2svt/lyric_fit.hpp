#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sv2svt/ja_moraic.hpp"
#include "sv2svt/note_timing.hpp"

namespace sv2svt {

/// Lyric of a note that sustains the previous mora's vowel.
inline constexpr std::string_view kContinuationLyric = "+";

struct TranslationCandidate {
  std::string text;
  double beam_score = 0.0;  // higher is better
  std::optional<MoraReading> reading;
};

struct CandidateDiagnostic {
  std::size_t index = 0;
  std::string message;
};

struct FitResult {
  TranslationCandidate chosen;
  std::size_t chosen_index = 0;
  std::size_t target_syllables = 0;
  std::size_t mora_count = 0;
  long deficit = 0;  // target - moras; negative only with fallback
  bool fallback_used = false;
  /// Candidates whose reading could not be resolved.
  std::vector<CandidateDiagnostic> diagnostics;
};

/// Resolves a candidate text into its mora reading.
using ReadingResolver = std::function<MoraReading(std::string_view)>;

ReadingResolver make_reading_resolver(Segmenter& segmenter, const ReadingDictionary& dict);

/// Index chosen by the fit rule over already-counted candidates.
///
/// Among counts <= target the smallest deficit wins; ties go to the higher
/// score, then the earlier position. When no count fits, the smallest
/// overshoot wins with the same tie order and `fallback` is set.
/// Entries with no count (unreadable) are never chosen.
struct FitChoice {
  std::size_t index = 0;
  bool fallback = false;
};
std::optional<FitChoice> choose_fit(std::span<const std::optional<std::size_t>> mora_counts,
                                    std::span<const double> scores, std::size_t target);

/// Resolves readings (where not already present) and applies choose_fit.
/// Throws NoCandidatesError for an empty list or when no candidate can be read.
FitResult select_candidate(std::vector<TranslationCandidate> candidates,
                           std::size_t target_syllables, const ReadingResolver& resolve);

/// Writes mora i into note i. Notes past the last mora get the "+"
/// continuation lyric. More moras than notes throws OverflowError unless
/// `allow_overflow`, in which case the surplus joins the final note's lyric.
std::vector<SyllableNote> assign_lyrics(std::vector<SyllableNote> notes,
                                        const MoraReading& reading,
                                        bool allow_overflow = false);

}  // namespace sv2svt
