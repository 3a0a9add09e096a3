#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <tuple>

namespace oracle {

bool is_vowel_token(const std::string& token) {
  return !token.empty() && std::isdigit(static_cast<unsigned char>(token.back()));
}

std::vector<PhonemeTokens> syllabify(const PhonemeTokens& phonemes) {
  std::vector<std::size_t> vowels;
  for (std::size_t i = 0; i < phonemes.size(); ++i) {
    if (is_vowel_token(phonemes[i])) vowels.push_back(i);
  }
  std::vector<PhonemeTokens> out(vowels.size());
  if (vowels.empty()) return out;
  for (std::size_t i = 0; i < phonemes.size(); ++i) {
    std::size_t best = 0;
    long best_distance = -1;
    for (std::size_t v = 0; v < vowels.size(); ++v) {
      const long d = std::labs(static_cast<long>(i) - static_cast<long>(vowels[v]));
      // vowels ascend, so <= lets the right vowel win a tie
      if (best_distance < 0 || d <= best_distance) {
        best = v;
        best_distance = d;
      }
    }
    out[best].push_back(phonemes[i]);
  }
  return out;
}

std::vector<NoteSpan> reconstruct_notes(const std::vector<TimedToken>& timed) {
  std::vector<NoteSpan> notes;
  std::size_t i = 0;
  while (i < timed.size()) {
    std::size_t j = i;
    PhonemeTokens word;
    while (j < timed.size() && timed[j].word == timed[i].word) word.push_back(timed[j++].phoneme);
    std::size_t k = i;
    for (const auto& syl : syllabify(word)) {
      NoteSpan n;
      n.word = timed[i].word;
      n.onset_us = timed[k].start_us;
      n.phonemes = syl;
      k += syl.size();
      n.duration_us = timed[k - 1].end_us - n.onset_us;
      notes.push_back(std::move(n));
    }
    i = j;
  }
  return notes;
}

double hold_value(const std::vector<CurvePoint>& points, std::int64_t t_us) {
  double value = points.front().value;
  for (const auto& p : points) {
    if (p.time_us <= t_us) value = p.value;
  }
  return value;
}

std::size_t count_moras(const std::u32string& kana) {
  static const std::u32string kLeaning = U"ゃゅょぁぃぅぇぉゎャュョァィゥェォヮ";
  std::size_t n = 0;
  for (char32_t c : kana) {
    if (c == U' ' || c == U'　') continue;
    if (kLeaning.find(c) != std::u32string::npos) continue;
    if (c >= 0x31F0 && c <= 0x31FF) continue;  // small katakana extensions
    ++n;
  }
  return n;
}

std::optional<Choice> select(const std::vector<std::optional<std::size_t>>& counts,
                             const std::vector<double>& scores, std::size_t target) {
  using Key = std::tuple<bool, std::size_t, double, std::size_t>;
  std::optional<Key> best;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (!counts[i]) continue;
    const std::size_t c = *counts[i];
    const bool over = c > target;
    const Key key{over, over ? c - target : target - c, -scores[i], i};
    if (!best || key < *best) best = key;
  }
  if (!best) return std::nullopt;
  return Choice{std::get<3>(*best), std::get<0>(*best)};
}

std::vector<std::string> assign(std::size_t notes, const std::vector<std::string>& moras) {
  std::vector<std::string> out(notes, "+");
  for (std::size_t i = 0; i < moras.size(); ++i) {
    if (i < notes) {
      out[i] = moras[i];
    } else {
      out[notes - 1] += moras[i];
    }
  }
  return out;
}

double rank_sum_p(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pool = a;
  pool.insert(pool.end(), b.begin(), b.end());
  const std::size_t n = pool.size();
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    double less = 0;
    double equal = 0;
    for (double x : pool) {
      less += x < pool[i];
      equal += x == pool[i];
    }
    rank[i] = less + (equal + 1.0) / 2.0;
  }
  const double expected = static_cast<double>(a.size()) * (n + 1) / 2.0;
  double observed = 0;
  for (std::size_t i = 0; i < a.size(); ++i) observed += rank[i];
  const double threshold = std::fabs(observed - expected) - 1e-9;

  std::size_t total = 0;
  std::size_t extreme = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != a.size()) continue;
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) s += rank[i];
    }
    ++total;
    if (std::fabs(s - expected) >= threshold) ++extreme;
  }
  return static_cast<double>(extreme) / static_cast<double>(total);
}

double ticks(double duration_s, double tempo_bpm, int resolution) {
  return duration_s * tempo_bpm / 60.0 * resolution;
}

}  // namespace oracle
