#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sv2svt {

enum class MoraKind {
  kPlain,
  kYoon,     // kana + small glide or vowel (きょ, ファ)
  kSokuon,   // っ
  kChoon,    // ー
  kMoraicN,  // ん
};

std::string_view to_string(MoraKind kind) noexcept;

/// One mora of kana text.
struct KanaToken {
  std::string surface;
  MoraKind kind = MoraKind::kPlain;

  friend bool operator==(const KanaToken&, const KanaToken&) = default;
};

/// Splits kana into moras. Small ゃゅょ (and the other small glides and
/// vowels) bind to the preceding kana; っ, ー and ん are moras of their own.
/// ASCII and ideographic spaces are skipped.
/// Throws NotKanaError for kanji or any other non-kana character and
/// TokenizationError for a small kana with nothing to attach to.
std::vector<KanaToken> tokenize_kana(std::string_view text);

struct MoraReading {
  std::string surface;
  std::vector<KanaToken> reading;

  std::size_t mora_count() const noexcept { return reading.size(); }

  /// Reading surfaces concatenated.
  std::string kana() const;
};

/// Kanji word -> hiragana readings, first reading is the default.
class ReadingDictionary {
 public:
  /// `surface<TAB>reading1<TAB>reading2...`; '#' starts a comment line.
  static ReadingDictionary parse(std::string_view tsv);
  static ReadingDictionary load(const std::filesystem::path& path);

  /// Adds or replaces `surface`. Throws NotKanaError for non-kana readings.
  void add(std::string surface, std::vector<std::string> readings);

  /// Copies entries of `other` that this dictionary lacks.
  void merge_missing(const ReadingDictionary& other);

  const std::vector<std::string>* find(std::string_view surface) const;
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  /// Sorted by surface.
  std::string serialize() const;

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> entries_;
};

/// Splits a Japanese sentence into words. Implementations backed by a
/// subprocess are not reentrant; callers serialize per instance.
class Segmenter {
 public:
  virtual ~Segmenter() = default;
  virtual std::vector<std::string> segment(const std::string& sentence) = 0;
};

/// Fallback segmenter: maximal kanji runs form one word, maximal runs of
/// everything else another.
class KanjiRunSegmenter final : public Segmenter {
 public:
  std::vector<std::string> segment(const std::string& sentence) override;
};

/// Replaces each segmented word containing kanji by its default reading,
/// drops punctuation, and tokenizes the result.
///
/// Lookup is by whole word first; failing that, each kanji run inside the
/// word is looked up on its own (so 離れ resolves through 離 when only that
/// is listed). Throws UnknownReadingError naming every unresolved word.
MoraReading resolve_readings(std::string_view text, Segmenter& segmenter,
                             const ReadingDictionary& dict);

std::size_t count_moras(std::string_view text, Segmenter& segmenter,
                        const ReadingDictionary& dict);

}  // namespace sv2svt
