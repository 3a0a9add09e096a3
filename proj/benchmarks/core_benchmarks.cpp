#include <benchmark/benchmark.h>

#include <random>

#include "sv2svt/interchange.hpp"
#include "sv2svt/ja_moraic.hpp"
#include "sv2svt/phonology.hpp"
#include "sv2svt/stats.hpp"

using namespace sv2svt;

static void BM_SyllabifyDictionary(benchmark::State& state) {
  const auto dict = PronunciationDictionary::load(SV2SVT_BENCH_DATA_DIR "/cmudict_sample.dict");
  const auto entries = dict.entries();
  for (auto _ : state) {
    std::size_t n = 0;
    for (const auto* e : entries) {
      if (count_vowels(e->phonemes) > 0) n += syllabify(e->phonemes).size();
    }
    benchmark::DoNotOptimize(n);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(entries.size()));
}
BENCHMARK(BM_SyllabifyDictionary);

static void BM_TokenizeKana(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < state.range(0); ++i) text += "きょうはがっこうへいくコーヒー";
  for (auto _ : state) benchmark::DoNotOptimize(tokenize_kana(text).size());
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_TokenizeKana)->Arg(1)->Arg(64);

static void BM_RankSum(benchmark::State& state) {
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> score(1, 5);
  std::vector<double> a(static_cast<std::size_t>(state.range(0)));
  std::vector<double> b(a.size());
  for (auto& x : a) x = score(rng);
  for (auto& x : b) x = score(rng);
  for (auto _ : state) benchmark::DoNotOptimize(stats::wilcoxon_rank_sum(a, b).p_value);
}
BENCHMARK(BM_RankSum)->Arg(6)->Arg(100);

static void BM_WriteProject(benchmark::State& state) {
  SynthProject p;
  for (int i = 0; i < state.range(0); ++i) {
    SyllableNote n;
    n.onset = Micros(i * 200000);
    n.duration = Micros(180000);
    n.syllable = make_syllable(parse_phonemes("B L UW1"));
    n.lyric = "あ";
    p.notes.push_back(n);
    p.deviation.points.push_back({Micros(i * 200000), 0.25 * (i % 7)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(write_project(p).size());
}
BENCHMARK(BM_WriteProject)->Arg(16)->Arg(512);

BENCHMARK_MAIN();
