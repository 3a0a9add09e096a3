#include "sv2svt/lyric_fit.hpp"

#include <cmath>

#include "sv2svt/error.hpp"

namespace sv2svt {

ReadingResolver make_reading_resolver(Segmenter& segmenter, const ReadingDictionary& dict) {
  return [&segmenter, &dict](std::string_view text) {
    return resolve_readings(text, segmenter, dict);
  };
}

std::optional<FitChoice> choose_fit(std::span<const std::optional<std::size_t>> mora_counts,
                                    std::span<const double> scores, std::size_t target) {
  std::optional<std::size_t> best_fit;
  std::optional<std::size_t> best_over;
  auto better = [&](std::size_t candidate, std::size_t incumbent, auto distance) {
    const auto dc = distance(*mora_counts[candidate]);
    const auto di = distance(*mora_counts[incumbent]);
    if (dc != di) return dc < di;
    return scores[candidate] > scores[incumbent];  // equal score keeps the earlier one
  };
  const auto deficit = [target](std::size_t m) { return target - m; };
  const auto overshoot = [target](std::size_t m) { return m - target; };

  for (std::size_t i = 0; i < mora_counts.size(); ++i) {
    if (!mora_counts[i]) continue;
    if (*mora_counts[i] <= target) {
      if (!best_fit || better(i, *best_fit, deficit)) best_fit = i;
    } else {
      if (!best_over || better(i, *best_over, overshoot)) best_over = i;
    }
  }
  if (best_fit) return FitChoice{*best_fit, false};
  if (best_over) return FitChoice{*best_over, true};
  return std::nullopt;
}

FitResult select_candidate(std::vector<TranslationCandidate> candidates,
                           std::size_t target_syllables, const ReadingResolver& resolve) {
  if (candidates.empty()) throw NoCandidatesError("candidate list is empty");
  if (target_syllables == 0) throw ValidationError("target syllable count must be at least 1");

  FitResult result;
  std::vector<std::optional<std::size_t>> counts(candidates.size());
  std::vector<double> scores(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto& c = candidates[i];
    if (!std::isfinite(c.beam_score)) {
      throw ValidationError("candidate " + std::to_string(i) + " has a non-finite score");
    }
    scores[i] = c.beam_score;
    if (!c.reading) {
      try {
        c.reading = resolve(c.text);
      } catch (const ValidationError& e) {
        result.diagnostics.push_back({i, e.what()});
        continue;
      }
    }
    counts[i] = c.reading->mora_count();
  }

  const auto choice = choose_fit(counts, scores, target_syllables);
  if (!choice) {
    std::string detail;
    for (const auto& d : result.diagnostics) {
      detail += "\n  [" + std::to_string(d.index) + "] " + d.message;
    }
    throw NoCandidatesError("no candidate could be read:" + detail);
  }

  result.chosen_index = choice->index;
  result.chosen = std::move(candidates[choice->index]);
  result.target_syllables = target_syllables;
  result.mora_count = result.chosen.reading->mora_count();
  result.deficit = static_cast<long>(target_syllables) - static_cast<long>(result.mora_count);
  result.fallback_used = choice->fallback;
  return result;
}

std::vector<SyllableNote> assign_lyrics(std::vector<SyllableNote> notes,
                                        const MoraReading& reading, bool allow_overflow) {
  const auto& moras = reading.reading;
  if (moras.size() > notes.size()) {
    if (!allow_overflow || notes.empty()) {
      throw OverflowError(std::to_string(moras.size()) + " moras do not fit " +
                          std::to_string(notes.size()) + " notes");
    }
  }
  for (std::size_t i = 0; i < notes.size(); ++i) {
    notes[i].lyric = i < moras.size() ? moras[i].surface : std::string(kContinuationLyric);
  }
  for (std::size_t i = notes.size(); i < moras.size(); ++i) {
    *notes.back().lyric += moras[i].surface;
  }
  return notes;
}

}  // namespace sv2svt
