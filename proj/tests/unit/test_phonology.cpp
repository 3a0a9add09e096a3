#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "sv2svt/error.hpp"
#include "sv2svt/phonology.hpp"
#include "test_support.hpp"

using namespace sv2svt;

namespace {

std::vector<std::string> syllable_strings(std::string_view phonemes) {
  std::vector<std::string> out;
  for (const auto& s : syllabify(parse_phonemes(phonemes))) out.push_back(join_phonemes(s.phonemes));
  return out;
}

oracle::PhonemeTokens tokens(std::span<const Phoneme> phonemes) {
  oracle::PhonemeTokens out;
  for (const auto& p : phonemes) out.push_back(p.to_string());
  return out;
}

// Whitespace runs collapsed, comment and blank lines dropped.
std::string normalized_lines(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    if (line.rfind(";;;", 0) == 0) continue;
    std::istringstream words(line);
    std::string w;
    std::string joined;
    while (words >> w) joined += (joined.empty() ? "" : " ") + w;
    if (!joined.empty()) out += joined + "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("dictionary line with seven phonemes") {
  const auto dict = PronunciationDictionary::parse("BLUEBERRY  B L UW1 B EH2 R IY0\n");
  const auto* entry = dict.primary("blueberry");
  REQUIRE(entry != nullptr);
  CHECK(entry->phonemes.size() == 7);
  std::vector<std::string> vowels;
  for (const auto& p : entry->phonemes) {
    if (p.is_vowel()) vowels.push_back(p.to_string());
  }
  CHECK(vowels == std::vector<std::string>{"UW1", "EH2", "IY0"});
}

TEST_CASE("comment lines produce no entry") {
  const auto dict = PronunciationDictionary::parse(";;; comment\n\n");
  CHECK(dict.entry_count() == 0);
}

TEST_CASE("variants parse and re-serialize") {
  const std::string text = "READ  R EH1 D\nREAD(1)  R IY1 D\n";
  const auto dict = PronunciationDictionary::parse(text);
  const auto* variants = dict.find("read");
  REQUIRE(variants != nullptr);
  REQUIRE(variants->size() == 2);
  CHECK((*variants)[1].variant == 1);
  CHECK(join_phonemes((*variants)[1].phonemes) == "R IY1 D");
  CHECK(dict.primary("READ")->variant == 0);
  CHECK(dict.serialize() == text);
}

TEST_CASE("dictionary parse errors name the line") {
  auto line_of = [](std::string_view text) {
    try {
      PronunciationDictionary::parse(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("A  AH0\nB  XX1\n") == 2);     // unknown symbol
  CHECK(line_of("A  AH\n") == 1);              // vowel without stress
  CHECK(line_of("A  AH0 K1\n") == 1);          // stressed consonant
  CHECK(line_of("A  AH3\n") == 1);             // stress out of range
  CHECK(line_of(";;; x\nLONELY\n") == 2);      // no phonemes
  CHECK(line_of("A  AH0\nA  EY1\n") == 2);     // duplicate variant
  CHECK_THROWS_WITH_AS(parse_phoneme("QQ"), doctest::Contains("QQ"), ParseError);
}

TEST_CASE("CRLF dictionaries parse like LF ones") {
  const auto dict = PronunciationDictionary::parse("CAT  K AE1 T\r\nA  AH0\r\n");
  CHECK(join_phonemes(dict.primary("CAT")->phonemes) == "K AE1 T");
}

TEST_CASE("syllabify examples") {
  CHECK(syllable_strings("B L UW1 B EH2 R IY0") ==
        std::vector<std::string>{"B L UW1", "B EH2", "R IY0"});
  CHECK(syllable_strings("K AE1 T") == std::vector<std::string>{"K AE1 T"});
  CHECK(syllable_strings("EH1 K S T R AH0") == std::vector<std::string>{"EH1 K S", "T R AH0"});
  CHECK(syllable_strings("AY1 AH0") == std::vector<std::string>{"AY1", "AH0"});

  std::vector<std::string> names;
  for (const auto& s : syllabify(parse_phonemes("B L UW1 B EH2 R IY0"))) names.push_back(s.to_string());
  CHECK(names == std::vector<std::string>{"BLUW", "BEH", "RIY"});
}

TEST_CASE("syllabify without a vowel fails") {
  CHECK_THROWS_AS(syllabify(parse_phonemes("HH M")), NoNucleusError);
  CHECK_THROWS_AS(syllabify(std::vector<Phoneme>{}), NoNucleusError);
}

TEST_CASE("make_syllable finds the nucleus") {
  const auto s = make_syllable(parse_phonemes("S T R EH1 NG K TH S"));
  CHECK(s.nucleus_index == 3);
  CHECK(s.nucleus().symbol == "EH");
  CHECK_THROWS_AS(make_syllable(parse_phonemes("AH0 AH0")), NoNucleusError);
}

TEST_CASE("count_syllables") {
  const auto dict = PronunciationDictionary::load(support::data_file("cmudict_sample.dict"));
  CHECK(count_syllables("blueberry", dict) == 3);
  CHECK(count_syllables("", dict) == 0);
  CHECK(count_syllables("blueberry blueberry", dict) == 6);
  CHECK(count_syllables("Hmm, my heart!", dict) == 2);
  CHECK(count_syllables("'blueberry'", dict) == 3);

  try {
    count_syllables("blueberry zzyzx qwrk", dict);
    FAIL("expected OovError");
  } catch (const OovError& e) {
    CHECK(e.words() == std::vector<std::string>{"ZZYZX", "QWRK"});
  }
  CHECK(count_syllables("blueberry zzyzx", dict, OovPolicy::kSkip) == 4);
}

TEST_CASE("normalize_word and split_words") {
  CHECK(normalize_word("Don't,") == "DON'T");
  CHECK(normalize_word("--") == "");
  CHECK(split_words("  Hmm,  my -- heart ") == std::vector<std::string>{"HMM", "MY", "HEART"});
}

TEST_CASE("bundled sample re-serializes modulo whitespace") {
  const auto text = support::slurp(support::data_file("cmudict_sample.dict"));
  const auto dict = PronunciationDictionary::parse(text);
  CHECK(dict.entry_count() == 1000);
  CHECK(normalized_lines(dict.serialize()) == normalized_lines(text));
}

TEST_CASE("bundled sample agrees with the nearest-vowel oracle") {
  const auto dict = PronunciationDictionary::load(support::data_file("cmudict_sample.dict"));
  std::size_t checked = 0;
  for (const auto* entry : dict.entries()) {
    if (count_vowels(entry->phonemes) == 0) continue;
    std::vector<oracle::PhonemeTokens> got;
    for (const auto& s : syllabify(entry->phonemes)) got.push_back(tokens(s.phonemes));
    CAPTURE(entry->word);
    CHECK(got == oracle::syllabify(tokens(entry->phonemes)));
    ++checked;
  }
  CHECK(checked > 990);
}

TEST_CASE("random sequences: partition, count, one vowel each") {
  static const char* kSymbols[] = {"AA1", "IY0", "UW2", "ER0", "AY1", "B",  "K", "S",
                                   "T",   "NG",  "TH",  "R",   "L",   "HH", "M", "ZH"};
  std::mt19937 rng(20240501);
  std::uniform_int_distribution<int> len(1, 14);
  std::uniform_int_distribution<int> pick(0, 15);
  for (int iter = 0; iter < 1000; ++iter) {
    std::vector<Phoneme> seq;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) seq.push_back(parse_phoneme(kSymbols[pick(rng)]));
    if (count_vowels(seq) == 0) continue;
    const auto syls = syllabify(seq);
    std::vector<Phoneme> flat;
    for (const auto& s : syls) {
      CHECK(count_vowels(s.phonemes) == 1);
      flat.insert(flat.end(), s.phonemes.begin(), s.phonemes.end());
    }
    CHECK(flat == seq);
    CHECK(syls.size() == count_vowels(seq));
  }
}
