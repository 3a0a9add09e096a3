#include "sv2svt/ja_moraic.hpp"

#include <fstream>
#include <sstream>

#include "sv2svt/error.hpp"
#include "sv2svt/unicode.hpp"

namespace sv2svt {

namespace {

// Small kana that never stand alone: glides (ゃゅょゎ) and vowels (ぁぃぅぇぉ).
bool binds_to_previous(char32_t c) noexcept {
  switch (c) {
    case U'ぁ': case U'ぃ': case U'ぅ': case U'ぇ': case U'ぉ':
    case U'ゃ': case U'ゅ': case U'ょ': case U'ゎ':
    case U'ァ': case U'ィ': case U'ゥ': case U'ェ': case U'ォ':
    case U'ャ': case U'ュ': case U'ョ': case U'ヮ':
      return true;
    default:
      return c >= 0x31F0 && c <= 0x31FF;
  }
}

MoraKind classify(char32_t c) noexcept {
  switch (c) {
    case U'っ': case U'ッ':
      return MoraKind::kSokuon;
    case U'ん': case U'ン':
      return MoraKind::kMoraicN;
    case U'ー':
      return MoraKind::kChoon;
    default:
      return MoraKind::kPlain;
  }
}

std::string strip_spaces(std::string_view utf8) {
  std::u32string out;
  for (char32_t c : unicode::decode(utf8)) {
    if (c != U' ' && c != 0x3000 && c != U'\t') out.push_back(c);
  }
  return unicode::encode(out);
}

}  // namespace

std::string_view to_string(MoraKind kind) noexcept {
  switch (kind) {
    case MoraKind::kPlain: return "plain";
    case MoraKind::kYoon: return "yoon";
    case MoraKind::kSokuon: return "sokuon";
    case MoraKind::kChoon: return "choon";
    case MoraKind::kMoraicN: return "moraic_n";
  }
  return "plain";
}

std::vector<KanaToken> tokenize_kana(std::string_view text) {
  const std::u32string chars = unicode::decode(unicode::nfc(text));
  std::vector<KanaToken> tokens;
  for (char32_t c : chars) {
    if (c == U' ' || c == 0x3000) continue;
    if (!unicode::is_kana(c)) {
      throw NotKanaError("not a kana character: '" + unicode::encode(c) + "'");
    }
    if (binds_to_previous(c)) {
      if (tokens.empty() || tokens.back().kind != MoraKind::kPlain) {
        throw TokenizationError("small kana '" + unicode::encode(c) +
                                "' does not follow a full kana");
      }
      tokens.back().surface += unicode::encode(c);
      tokens.back().kind = MoraKind::kYoon;
      continue;
    }
    tokens.push_back({unicode::encode(c), classify(c)});
  }
  return tokens;
}

std::string MoraReading::kana() const {
  std::string out;
  for (const auto& t : reading) out += t.surface;
  return out;
}

// ---------------------------------------------------------------------------
// ReadingDictionary
// ---------------------------------------------------------------------------

ReadingDictionary ReadingDictionary::parse(std::string_view tsv) {
  ReadingDictionary dict;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < tsv.size()) {
    auto eol = tsv.find('\n', pos);
    if (eol == std::string_view::npos) eol = tsv.size();
    std::string_view line = tsv.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      auto tab = line.find('\t', start);
      fields.emplace_back(line.substr(start, tab == line.npos ? line.npos : tab - start));
      if (tab == line.npos) break;
      start = tab + 1;
    }
    if (fields.size() < 2 || fields[0].empty()) {
      throw ParseError(line_no, "expected 'surface<TAB>reading...'");
    }
    std::string surface = unicode::nfc(fields[0]);
    fields.erase(fields.begin());
    try {
      dict.add(std::move(surface), std::move(fields));
    } catch (const ValidationError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return dict;
}

ReadingDictionary ReadingDictionary::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open reading dictionary: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void ReadingDictionary::add(std::string surface, std::vector<std::string> readings) {
  if (readings.empty()) throw ValidationError("no readings for '" + surface + "'");
  for (auto& r : readings) {
    r = unicode::nfc(r);
    if (r.empty()) throw NotKanaError("empty reading for '" + surface + "'");
    tokenize_kana(r);
  }
  entries_[std::move(surface)] = std::move(readings);
}

void ReadingDictionary::merge_missing(const ReadingDictionary& other) {
  for (const auto& [surface, readings] : other.entries_) entries_.try_emplace(surface, readings);
}

const std::vector<std::string>* ReadingDictionary::find(std::string_view surface) const {
  auto it = entries_.find(surface);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string ReadingDictionary::serialize() const {
  std::string out;
  for (const auto& [surface, readings] : entries_) {
    out += surface;
    for (const auto& r : readings) out += '\t' + r;
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Resolution
// ---------------------------------------------------------------------------

std::vector<std::string> KanjiRunSegmenter::segment(const std::string& sentence) {
  std::vector<std::string> words;
  std::u32string current;
  bool current_kanji = false;
  for (char32_t c : unicode::decode(sentence)) {
    if (c == U' ' || c == 0x3000) {
      if (!current.empty()) words.push_back(unicode::encode(current));
      current.clear();
      continue;
    }
    const bool kanji = unicode::is_kanji(c);
    if (!current.empty() && kanji != current_kanji) {
      words.push_back(unicode::encode(current));
      current.clear();
    }
    current_kanji = kanji;
    current.push_back(c);
  }
  if (!current.empty()) words.push_back(unicode::encode(current));
  return words;
}

MoraReading resolve_readings(std::string_view text, Segmenter& segmenter,
                             const ReadingDictionary& dict) {
  const std::string normalized = unicode::nfc(text);
  const std::vector<std::string> words = segmenter.segment(normalized);

  std::string joined;
  for (const auto& w : words) joined += w;
  if (strip_spaces(unicode::nfc(joined)) != strip_spaces(normalized)) {
    throw ValidationError("segmentation of '" + normalized + "' is not a partition of the input");
  }

  std::string kana;
  std::vector<std::string> unknown;
  for (const auto& raw : words) {
    std::u32string word;
    for (char32_t c : unicode::decode(unicode::nfc(raw))) {
      if (!unicode::is_unsung(c)) word.push_back(c);
    }
    if (word.empty()) continue;
    const std::string utf8 = unicode::encode(word);

    bool has_kanji = false;
    for (char32_t c : word) has_kanji = has_kanji || unicode::is_kanji(c);
    if (!has_kanji) {
      kana += utf8;
      continue;
    }
    if (const auto* readings = dict.find(utf8)) {
      kana += readings->front();
      continue;
    }

    // Per kanji run, keeping kana (okurigana) as written.
    std::string piece;
    bool resolved = true;
    std::size_t i = 0;
    while (i < word.size()) {
      if (!unicode::is_kanji(word[i])) {
        piece += unicode::encode(word[i++]);
        continue;
      }
      std::size_t j = i;
      while (j < word.size() && unicode::is_kanji(word[j])) ++j;
      const auto run = unicode::encode(std::u32string_view(word).substr(i, j - i));
      const auto* readings = dict.find(run);
      if (!readings) {
        resolved = false;
        break;
      }
      piece += readings->front();
      i = j;
    }
    if (!resolved) {
      unknown.push_back(utf8);
      continue;
    }
    kana += piece;
  }
  if (!unknown.empty()) throw UnknownReadingError(std::move(unknown));

  MoraReading out;
  out.surface = normalized;
  out.reading = tokenize_kana(kana);
  return out;
}

std::size_t count_moras(std::string_view text, Segmenter& segmenter,
                        const ReadingDictionary& dict) {
  return resolve_readings(text, segmenter, dict).mora_count();
}

}  // namespace sv2svt
