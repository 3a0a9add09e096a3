#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sv2svt {

/// One ARPAbet phone. Vowels carry a stress digit (0-2), consonants never do.
struct Phoneme {
  std::string symbol;
  std::optional<int> stress;

  bool is_vowel() const noexcept { return stress.has_value(); }

  /// "UW1", "B".
  std::string to_string() const;

  friend bool operator==(const Phoneme&, const Phoneme&) = default;
};

bool is_arpabet_symbol(std::string_view symbol) noexcept;
bool is_arpabet_vowel(std::string_view symbol) noexcept;

/// Parses "UW1" / "B". Throws ParseError naming the symbol when it is not
/// in the ARPAbet inventory or the stress digit is missing/misplaced.
Phoneme parse_phoneme(std::string_view token, std::size_t line = 0);

/// Whitespace-separated phoneme list, e.g. "B L UW1".
std::vector<Phoneme> parse_phonemes(std::string_view text, std::size_t line = 0);

std::string join_phonemes(std::span<const Phoneme> phonemes);

/// True when both sequences have the same symbols in order, ignoring stress.
bool same_symbols(std::span<const Phoneme> a, std::span<const Phoneme> b) noexcept;

struct PronunciationEntry {
  std::string word;  // uppercase headword
  std::size_t variant = 0;
  std::vector<Phoneme> phonemes;
};

/// A word's pronunciations loaded from CMUdict-format text. Read-only after
/// construction.
class PronunciationDictionary {
 public:
  static PronunciationDictionary parse(std::string_view text);
  static PronunciationDictionary load(const std::filesystem::path& path);

  /// All variants of `word` (case-insensitive), ordered as in the source.
  const std::vector<PronunciationEntry>* find(std::string_view word) const;

  /// Variant 0 when present, else the first listed variant.
  const PronunciationEntry* primary(std::string_view word) const;

  std::size_t headword_count() const noexcept { return entries_.size(); }
  std::size_t entry_count() const noexcept { return line_order_.size(); }

  /// Entries in source order as `WORD  PH PH`, `WORD(n)  PH PH`.
  std::string serialize() const;

  /// Every entry, in source order.
  std::vector<const PronunciationEntry*> entries() const;

 private:
  std::unordered_map<std::string, std::vector<PronunciationEntry>> entries_;
  std::vector<std::pair<std::string, std::size_t>> line_order_;
};

struct Syllable {
  std::vector<Phoneme> phonemes;
  std::size_t nucleus_index = 0;

  const Phoneme& nucleus() const { return phonemes.at(nucleus_index); }

  /// Symbols without stress digits, concatenated: "BLUW".
  std::string to_string() const;

  friend bool operator==(const Syllable&, const Syllable&) = default;
};

std::size_t count_vowels(std::span<const Phoneme> phonemes) noexcept;

/// Splits a phoneme sequence into one syllable per vowel. Each consonant
/// joins the vowel nearest to it; a consonant equidistant from two vowels
/// joins the right one. Throws NoNucleusError when there is no vowel.
std::vector<Syllable> syllabify(std::span<const Phoneme> phonemes);

/// Rebuilds a Syllable from its phonemes, locating the single vowel.
/// Throws NoNucleusError unless exactly one vowel is present.
Syllable make_syllable(std::vector<Phoneme> phonemes);

enum class OovPolicy {
  kError,  // unknown words abort
  kSkip,   // unknown words count as one syllable
};

/// Uppercases and trims surrounding punctuation. Apostrophes survive
/// ("don't" -> "DON'T"). Returns empty for punctuation-only tokens.
std::string normalize_word(std::string_view raw);

/// Whitespace-separated words of a lyric line, normalized; empty tokens dropped.
std::vector<std::string> split_words(std::string_view line);

/// Sum of vowel counts of each word's primary pronunciation. Vowel-less
/// pronunciations ("HMM") add nothing; they merge into a neighbouring
/// syllable downstream.
std::size_t count_syllables(std::string_view line,
                            const PronunciationDictionary& dict,
                            OovPolicy policy = OovPolicy::kError);

}  // namespace sv2svt
