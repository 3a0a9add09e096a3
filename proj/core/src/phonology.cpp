#include "sv2svt/phonology.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "sv2svt/error.hpp"

namespace sv2svt {

namespace {

constexpr std::array<std::string_view, 15> kVowels = {
    "AA", "AE", "AH", "AO", "AW", "AY", "EH", "ER",
    "EY", "IH", "IY", "OW", "OY", "UH", "UW"};

constexpr std::array<std::string_view, 24> kConsonants = {
    "B", "CH", "D", "DH", "F", "G",  "HH", "JH", "K", "L", "M", "N",
    "NG", "P", "R", "S", "SH", "T", "TH", "V",  "W",  "Y", "Z", "ZH"};

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

std::vector<std::string_view> split_ws(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string to_upper_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

bool is_arpabet_vowel(std::string_view symbol) noexcept {
  return std::find(kVowels.begin(), kVowels.end(), symbol) != kVowels.end();
}

bool is_arpabet_symbol(std::string_view symbol) noexcept {
  return is_arpabet_vowel(symbol) ||
         std::find(kConsonants.begin(), kConsonants.end(), symbol) != kConsonants.end();
}

std::string Phoneme::to_string() const {
  return stress ? symbol + static_cast<char>('0' + *stress) : symbol;
}

Phoneme parse_phoneme(std::string_view token, std::size_t line) {
  std::string_view symbol = token;
  std::optional<int> stress;
  if (!token.empty() && std::isdigit(static_cast<unsigned char>(token.back()))) {
    symbol = token.substr(0, token.size() - 1);
    stress = token.back() - '0';
  }
  if (!is_arpabet_symbol(symbol)) {
    throw ParseError(line, "unknown ARPAbet symbol '" + std::string(token) + "'");
  }
  const bool vowel = is_arpabet_vowel(symbol);
  if (vowel && !stress) {
    throw ParseError(line, "vowel '" + std::string(token) + "' lacks a stress digit");
  }
  if (!vowel && stress) {
    throw ParseError(line, "consonant '" + std::string(token) + "' carries a stress digit");
  }
  if (stress && *stress > 2) {
    throw ParseError(line, "stress digit out of range in '" + std::string(token) + "'");
  }
  return Phoneme{std::string(symbol), stress};
}

std::vector<Phoneme> parse_phonemes(std::string_view text, std::size_t line) {
  std::vector<Phoneme> out;
  for (auto token : split_ws(text)) out.push_back(parse_phoneme(token, line));
  return out;
}

std::string join_phonemes(std::span<const Phoneme> phonemes) {
  std::string out;
  for (const auto& p : phonemes) {
    if (!out.empty()) out += ' ';
    out += p.to_string();
  }
  return out;
}

bool same_symbols(std::span<const Phoneme> a, std::span<const Phoneme> b) noexcept {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const Phoneme& x, const Phoneme& y) { return x.symbol == y.symbol; });
}

// ---------------------------------------------------------------------------
// PronunciationDictionary
// ---------------------------------------------------------------------------

PronunciationDictionary PronunciationDictionary::parse(std::string_view text) {
  PronunciationDictionary dict;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.starts_with(";;;")) continue;
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() < 2) {
      throw ParseError(line_no, "malformed line (no phonemes): '" + std::string(line) + "'");
    }

    std::string_view head = tokens[0];
    std::size_t variant = 0;
    if (head.size() > 3 && head.back() == ')') {
      const auto open = head.rfind('(');
      if (open != std::string_view::npos && open > 0) {
        auto digits = head.substr(open + 1, head.size() - open - 2);
        if (!digits.empty() &&
            std::all_of(digits.begin(), digits.end(),
                        [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
          variant = std::stoul(std::string(digits));
          head = head.substr(0, open);
        }
      }
    }

    PronunciationEntry entry;
    entry.word = to_upper_ascii(head);
    entry.variant = variant;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      entry.phonemes.push_back(parse_phoneme(tokens[i], line_no));
    }

    auto& group = dict.entries_[entry.word];
    for (const auto& existing : group) {
      if (existing.variant == variant) {
        throw ParseError(line_no, "duplicate entry for '" + std::string(tokens[0]) + "'");
      }
    }
    dict.line_order_.emplace_back(entry.word, group.size());
    group.push_back(std::move(entry));
  }
  return dict;
}

PronunciationDictionary PronunciationDictionary::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open pronunciation dictionary: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const std::vector<PronunciationEntry>* PronunciationDictionary::find(std::string_view word) const {
  auto it = entries_.find(to_upper_ascii(word));
  return it == entries_.end() ? nullptr : &it->second;
}

const PronunciationEntry* PronunciationDictionary::primary(std::string_view word) const {
  const auto* group = find(word);
  if (!group || group->empty()) return nullptr;
  for (const auto& e : *group) {
    if (e.variant == 0) return &e;
  }
  return &group->front();
}

std::vector<const PronunciationEntry*> PronunciationDictionary::entries() const {
  std::vector<const PronunciationEntry*> out;
  out.reserve(line_order_.size());
  for (const auto& [word, idx] : line_order_) out.push_back(&entries_.at(word)[idx]);
  return out;
}

std::string PronunciationDictionary::serialize() const {
  std::string out;
  for (const auto* e : entries()) {
    out += e->word;
    if (e->variant != 0) out += "(" + std::to_string(e->variant) + ")";
    out += "  ";
    out += join_phonemes(e->phonemes);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Syllabification
// ---------------------------------------------------------------------------

std::string Syllable::to_string() const {
  std::string out;
  for (const auto& p : phonemes) out += p.symbol;
  return out;
}

std::size_t count_vowels(std::span<const Phoneme> phonemes) noexcept {
  return static_cast<std::size_t>(
      std::count_if(phonemes.begin(), phonemes.end(),
                    [](const Phoneme& p) { return p.is_vowel(); }));
}

Syllable make_syllable(std::vector<Phoneme> phonemes) {
  std::optional<std::size_t> nucleus;
  for (std::size_t i = 0; i < phonemes.size(); ++i) {
    if (!phonemes[i].is_vowel()) continue;
    if (nucleus) throw NoNucleusError("syllable has more than one vowel: " + join_phonemes(phonemes));
    nucleus = i;
  }
  if (!nucleus) throw NoNucleusError("syllable has no vowel: " + join_phonemes(phonemes));
  return Syllable{std::move(phonemes), *nucleus};
}

std::vector<Syllable> syllabify(std::span<const Phoneme> phonemes) {
  std::vector<std::size_t> vowels;
  for (std::size_t i = 0; i < phonemes.size(); ++i) {
    if (phonemes[i].is_vowel()) vowels.push_back(i);
  }
  if (vowels.empty()) {
    throw NoNucleusError("no vowel in phoneme sequence: " + join_phonemes(phonemes));
  }

  // Between vowels at a and b there are m = b - a - 1 consonants; the first
  // floor(m / 2) are strictly closer to a, the rest are closer to b or tied.
  std::vector<Syllable> out;
  out.reserve(vowels.size());
  std::size_t begin = 0;
  for (std::size_t k = 0; k < vowels.size(); ++k) {
    std::size_t end = phonemes.size();
    if (k + 1 < vowels.size()) {
      const std::size_t gap = vowels[k + 1] - vowels[k] - 1;
      end = vowels[k] + 1 + gap / 2;
    }
    Syllable s;
    s.phonemes.assign(phonemes.begin() + static_cast<std::ptrdiff_t>(begin),
                      phonemes.begin() + static_cast<std::ptrdiff_t>(end));
    s.nucleus_index = vowels[k] - begin;
    out.push_back(std::move(s));
    begin = end;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Word-level counting
// ---------------------------------------------------------------------------

std::string normalize_word(std::string_view raw) {
  auto keep = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '\'';
  };
  std::size_t b = 0;
  std::size_t e = raw.size();
  while (b < e && !keep(raw[b])) ++b;
  while (e > b && !keep(raw[e - 1])) --e;
  return to_upper_ascii(raw.substr(b, e - b));
}

std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> out;
  for (auto token : split_ws(line)) {
    auto word = normalize_word(token);
    if (!word.empty()) out.push_back(std::move(word));
  }
  return out;
}

std::size_t count_syllables(std::string_view line, const PronunciationDictionary& dict,
                            OovPolicy policy) {
  std::size_t total = 0;
  std::vector<std::string> oov;
  for (auto token : split_ws(line)) {
    const auto word = normalize_word(token);
    if (word.empty()) continue;
    const PronunciationEntry* entry = dict.primary(word);
    if (!entry) {
      // Quoted words: 'HELLO' -> HELLO. Elisions such as 'CAUSE hit above.
      const auto b = word.find_first_not_of('\'');
      const auto e = word.find_last_not_of('\'');
      if (b != std::string::npos) entry = dict.primary(word.substr(b, e - b + 1));
    }
    if (!entry) {
      if (policy == OovPolicy::kSkip) {
        ++total;
      } else {
        oov.push_back(word);
      }
      continue;
    }
    total += count_vowels(entry->phonemes);
  }
  if (!oov.empty()) throw OovError(std::move(oov));
  return total;
}

}  // namespace sv2svt
