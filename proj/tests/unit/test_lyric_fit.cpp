#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sv2svt/error.hpp"
#include "sv2svt/lyric_fit.hpp"
#include "test_support.hpp"

using namespace sv2svt;

namespace {

std::optional<FitChoice> choose(std::vector<std::optional<std::size_t>> counts,
                                std::vector<double> scores, std::size_t target) {
  return choose_fit(counts, scores, target);
}

std::vector<std::optional<std::size_t>> counts_of(std::initializer_list<std::size_t> c) {
  return {c.begin(), c.end()};
}

SyllableNote note_at(std::int64_t onset_us) {
  SyllableNote n;
  n.onset = Micros(onset_us);
  n.duration = Micros(100000);
  n.syllable = make_syllable(parse_phonemes("K AA1"));
  return n;
}

MoraReading reading_of(std::string_view kana) {
  MoraReading r;
  r.surface = std::string(kana);
  r.reading = tokenize_kana(kana);
  return r;
}

std::vector<std::string> lyrics(const std::vector<SyllableNote>& notes) {
  std::vector<std::string> out;
  for (const auto& n : notes) out.push_back(n.lyric.value_or("?"));
  return out;
}

}  // namespace

TEST_CASE("fit rule examples") {
  auto c = choose(counts_of({7, 5, 3}), {0, 0, 0}, 5);
  CHECK(c->index == 1);
  CHECK_FALSE(c->fallback);

  c = choose(counts_of({4, 5, 8}), {0, 0, 0}, 6);
  CHECK(c->index == 1);

  c = choose(counts_of({5, 4}), {0, 0}, 3);
  CHECK(c->index == 1);
  CHECK(c->fallback);
}

TEST_CASE("ties: higher score, then earlier position") {
  CHECK(choose(counts_of({4, 4}), {-2.0, -1.0}, 4)->index == 1);
  CHECK(choose(counts_of({4, 4}), {-1.0, -1.0}, 4)->index == 0);
  CHECK(choose(counts_of({6, 6}), {-3.0, -1.0}, 4)->index == 1);
  CHECK(choose({std::nullopt, 9}, {5.0, -5.0}, 4)->index == 1);
  CHECK_FALSE(choose({std::nullopt}, {0.0}, 4).has_value());
}

TEST_CASE("fit rule agrees with the exhaustive ranking on small sets") {
  for (std::size_t target = 1; target <= 5; ++target) {
    for (int a = -1; a <= 6; ++a) {
      for (int b = -1; b <= 6; ++b) {
        for (int sa = 0; sa < 2; ++sa) {
          std::vector<std::optional<std::size_t>> counts;
          for (int v : {a, b}) counts.push_back(v < 0 ? std::nullopt : std::optional<std::size_t>(v));
          const std::vector<double> scores{sa ? 0.0 : -1.0, -0.5};
          const auto got = choose_fit(counts, scores, target);
          const auto want = oracle::select(counts, scores, target);
          REQUIRE(got.has_value() == want.has_value());
          if (got) {
            CHECK(got->index == want->index);
            CHECK(got->fallback == want->fallback);
          }
        }
      }
    }
  }
}

TEST_CASE("select_candidate resolves readings") {
  const auto dict = ReadingDictionary::load(support::data_file("readings_mini.tsv"));
  KanjiRunSegmenter seg;
  const auto resolver = make_reading_resolver(seg, dict);
  std::vector<TranslationCandidate> cands{{"青い空", -1.0, {}}, {"夢", -0.5, {}}, {"龍", 0.0, {}}};
  const auto r = select_candidate(cands, 4, resolver);
  CHECK(r.chosen_index == 1);
  CHECK(r.mora_count == 2);
  CHECK(r.deficit == 2);
  CHECK_FALSE(r.fallback_used);
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].index == 2);

  const auto over = select_candidate(cands, 1, resolver);
  CHECK(over.chosen_index == 1);
  CHECK(over.fallback_used);
  CHECK(over.deficit == -1);
}

TEST_CASE("select_candidate failures") {
  const ReadingDictionary empty;
  KanjiRunSegmenter seg;
  const auto resolver = make_reading_resolver(seg, empty);
  CHECK_THROWS_AS(select_candidate({}, 3, resolver), NoCandidatesError);
  CHECK_THROWS_AS(select_candidate({{"龍", 0.0, {}}}, 3, resolver), NoCandidatesError);
  CHECK_THROWS_AS(select_candidate({{"はな", 0.0, {}}}, 0, resolver), ValidationError);
  CHECK_THROWS_AS(select_candidate({{"はな", NAN, {}}}, 2, resolver), ValidationError);
}

TEST_CASE("select_candidate is deterministic") {
  const ReadingDictionary empty;
  KanjiRunSegmenter seg;
  const auto resolver = make_reading_resolver(seg, empty);
  std::vector<TranslationCandidate> cands{{"はなび", -1.0, {}}, {"そら", -1.0, {}}, {"うみ", -1.0, {}}};
  const auto a = select_candidate(cands, 2, resolver);
  const auto b = select_candidate(cands, 2, resolver);
  CHECK(a.chosen_index == b.chosen_index);
  CHECK(a.chosen_index == 1);
}

TEST_CASE("assign_lyrics examples") {
  std::vector<SyllableNote> three{note_at(0), note_at(200000), note_at(400000)};
  CHECK(lyrics(assign_lyrics(three, reading_of("はな"))) == std::vector<std::string>{"は", "な", "+"});
  CHECK(lyrics(assign_lyrics(three, reading_of("きょうと"))) ==
        std::vector<std::string>{"きょ", "う", "と"});
  std::vector<SyllableNote> two{note_at(0), note_at(200000)};
  CHECK_THROWS_AS(assign_lyrics(two, reading_of("はなび")), OverflowError);
  CHECK(lyrics(assign_lyrics(two, reading_of("はなび"), true)) == std::vector<std::string>{"は", "なび"});
}

TEST_CASE("assign_lyrics against the oracle up to six by six") {
  const std::vector<std::string> pool{"あ", "きょ", "っ", "ん", "ー", "ファ"};
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::size_t m = 1; m <= 6; ++m) {
      std::vector<SyllableNote> notes;
      for (std::size_t i = 0; i < n; ++i) notes.push_back(note_at(static_cast<std::int64_t>(i) * 150000));
      std::string kana = "か";
      std::vector<std::string> moras{"か"};
      for (std::size_t i = 1; i < m; ++i) {
        kana += pool[i % pool.size()];
        moras.push_back(pool[i % pool.size()]);
      }
      const auto r = reading_of(kana);
      REQUIRE(r.mora_count() == m);
      const auto got = assign_lyrics(notes, r, true);
      CHECK(lyrics(got) == oracle::assign(n, moras));
      REQUIRE(got.size() == n);
      std::string joined;
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(got[i].onset == notes[i].onset);
        CHECK(got[i].duration == notes[i].duration);
        if (*got[i].lyric != kContinuationLyric) joined += *got[i].lyric;
      }
      CHECK(joined == r.kana());
      if (m > n) CHECK_THROWS_AS(assign_lyrics(notes, r), OverflowError);
    }
  }
}
