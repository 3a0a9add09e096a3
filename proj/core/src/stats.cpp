#include "sv2svt/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <numeric>

#include "sv2svt/error.hpp"

namespace sv2svt::stats {

namespace {

constexpr double kPi = 3.14159265358979323846;

double mean_of(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_sd(std::span<const double> xs, double mean) {
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_int(std::string_view s, int& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

ConfidenceInterval mean_ci(std::span<const double> scores, double confidence) {
  if (scores.size() < 2) throw StatsError("confidence interval needs at least 2 scores");
  if (!(confidence > 0.0 && confidence < 1.0)) throw StatsError("confidence must lie in (0, 1)");
  const double mean = mean_of(scores);
  const double sd = sample_sd(scores, mean);
  const auto n = static_cast<double>(scores.size());
  const double t = student_t_quantile((1.0 + confidence) / 2.0, n - 1.0);
  return {mean, t * sd / std::sqrt(n)};
}

double student_t_quantile(double probability, double dof) {
  boost::math::students_t_distribution<double> dist(dof);
  return boost::math::quantile(dist, probability);
}

std::string_view to_string(PValueMethod method) noexcept {
  return method == PValueMethod::kExact ? "exact" : "normal-approx";
}

std::vector<double> mid_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw StatsError("rank-sum test needs two non-empty samples");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::size_t n = pooled.size();
  const std::size_t na = a.size();
  const auto ranks = mid_ranks(pooled);

  RankSumResult result;
  result.rank_sum_a = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(na), 0.0);

  if (n <= kExactRankSumLimit) {
    // Mid-ranks are multiples of 1/2, so doubled ranks are integers and the
    // permutation distribution of the doubled rank sum can be counted exactly.
    std::vector<std::size_t> doubled(n);
    for (std::size_t i = 0; i < n; ++i) doubled[i] = static_cast<std::size_t>(std::lround(2 * ranks[i]));
    const std::size_t max_sum = std::accumulate(doubled.begin(), doubled.end(), std::size_t{0});
    // ways[k][s]: subsets of size k with doubled rank sum s.
    std::vector<std::vector<double>> ways(na + 1, std::vector<double>(max_sum + 1, 0.0));
    ways[0][0] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = std::min(na, i + 1); k >= 1; --k) {
        for (std::size_t s = max_sum; s >= doubled[i]; --s) {
          ways[k][s] += ways[k - 1][s - doubled[i]];
          if (s == doubled[i]) break;
        }
      }
    }
    const auto observed = static_cast<long>(std::lround(2 * result.rank_sum_a));
    const auto expected = static_cast<long>(na * (n + 1));
    const long threshold = std::labs(observed - expected);
    double extreme = 0.0;
    double total = 0.0;
    for (std::size_t s = 0; s <= max_sum; ++s) {
      total += ways[na][s];
      if (std::labs(static_cast<long>(s) - expected) >= threshold) extreme += ways[na][s];
    }
    result.p_value = std::clamp(extreme / total, 0.0, 1.0);
    result.method = PValueMethod::kExact;
    return result;
  }

  const auto dn = static_cast<double>(n);
  const auto dna = static_cast<double>(na);
  const auto dnb = static_cast<double>(b.size());
  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && sorted[j] == sorted[i]) ++j;
    const auto t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  const double mean = dna * (dn + 1.0) / 2.0;
  const double variance = dna * dnb / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
  result.method = PValueMethod::kNormalApprox;
  if (variance <= 0.0) {
    result.p_value = 1.0;
    return result;
  }
  const double z = std::max(0.0, std::fabs(result.rank_sum_a - mean) - 0.5) / std::sqrt(variance);
  result.p_value = std::clamp(std::erfc(z / std::sqrt(2.0)), 0.0, 1.0);
  return result;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // P(K <= l) = sqrt(2 pi) / l * sum exp(-(2k-1)^2 pi^2 / (8 l^2))
    double sum = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double term = std::exp(-(2 * k - 1) * (2 * k - 1) * kPi * kPi / (8 * lambda * lambda));
      sum += term;
      if (term < 1e-17) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * kPi) / lambda * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw StatsError("KS test needs at least one value");
  std::vector<double> xs(sample.begin(), sample.end());
  std::sort(xs.begin(), xs.end());
  const auto n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size();) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    const double f = cdf(xs[i]);
    d = std::max({d, static_cast<double>(j) / n - f, f - static_cast<double>(i) / n});
    i = j;
  }
  KsResult r;
  r.d = std::clamp(d, 0.0, 1.0);
  r.p_value = kolmogorov_survival(std::sqrt(n) * r.d);
  return r;
}

KsResult ks_normality(std::span<const double> sample) {
  if (sample.empty()) throw StatsError("KS test needs at least one value");
  const double mean = mean_of(sample);
  const double sd = sample.size() > 1 ? sample_sd(sample, mean) : 0.0;
  if (!(sd > 0.0)) {
    // Every value equals the mean: the empirical CDF is the point mass itself.
    return KsResult{0.0, 1.0, true};
  }
  return ks_test(sample, [mean, sd](double x) { return normal_cdf((x - mean) / sd); });
}

// ---------------------------------------------------------------------------
// MOS tables
// ---------------------------------------------------------------------------

std::string_view to_string(System system) noexcept {
  return system == System::kBaseline ? "baseline" : "finetuned";
}

std::vector<double> ScoreTable::scores(System system, int question) const {
  std::vector<double> out;
  for (const auto& r : rows) {
    if (r.system == system && r.question == question) out.push_back(r.score);
  }
  return out;
}

ScoreTable parse_score_csv(std::string_view text) {
  ScoreTable table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;

    std::vector<std::string_view> f;
    std::size_t start = 0;
    while (true) {
      auto comma = line.find(',', start);
      f.push_back(trim(line.substr(start, comma == line.npos ? line.npos : comma - start)));
      if (comma == line.npos) break;
      start = comma + 1;
    }
    if (f.size() != 4) throw ParseError(line_no, "expected subject,system,question,score");

    int score = 0;
    if (!parse_int(f[3], score)) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw ParseError(line_no, "score is not an integer");
    }
    first = false;
    if (score < 1 || score > 5) throw ParseError(line_no, "score must be within 1..5");

    ScoreRow row;
    row.subject = std::string(f[0]);
    row.score = score;
    const auto sys = lower(f[1]);
    if (sys == "baseline") {
      row.system = System::kBaseline;
    } else if (sys == "finetuned" || sys == "fine-tuned") {
      row.system = System::kFinetuned;
    } else {
      throw ParseError(line_no, "unknown system '" + std::string(f[1]) + "'");
    }
    std::string_view q = f[2];
    if (!q.empty() && (q.front() == 'Q' || q.front() == 'q')) q.remove_prefix(1);
    if (!parse_int(q, row.question) || row.question < 1 || row.question > kQuestionCount) {
      throw ParseError(line_no, "question must be Q1..Q6");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

AnalysisReport analyze(const ScoreTable& table, double confidence) {
  AnalysisReport report;
  report.confidence = confidence;
  for (int q = 1; q <= kQuestionCount; ++q) {
    QuestionReport row;
    row.question = q;
    const auto base = table.scores(System::kBaseline, q);
    const auto tuned = table.scores(System::kFinetuned, q);
    row.n_baseline = base.size();
    row.n_finetuned = tuned.size();

    auto try_ci = [&](const std::vector<double>& xs, const char* label) -> std::optional<ConfidenceInterval> {
      try {
        return mean_ci(xs, confidence);
      } catch (const StatsError& e) {
        row.gaps.push_back(std::string(label) + " CI: " + e.what());
        return std::nullopt;
      }
    };
    row.baseline = try_ci(base, "baseline");
    row.finetuned = try_ci(tuned, "finetuned");

    if (!base.empty() && !tuned.empty()) {
      row.rank_sum = wilcoxon_rank_sum(base, tuned);
    } else {
      row.gaps.push_back("rank-sum: a system has no scores");
    }
    if (!base.empty()) row.ks_baseline = ks_normality(base);
    if (!tuned.empty()) row.ks_finetuned = ks_normality(tuned);
    report.questions.push_back(std::move(row));
  }
  return report;
}

std::string format_report_text(const AnalysisReport& report) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-4s %5s %5s  %-16s %-16s %-22s %s\n", "Q", "n(B)", "n(F)",
                "Baseline", "Fine-tuned", "p (rank-sum)", "KS D baseline/finetuned");
  out += buf;
  auto ci = [](const std::optional<ConfidenceInterval>& c) {
    if (!c) return std::string("-");
    char b[64];
    std::snprintf(b, sizeof(b), "%.2f +/- %.2f", c->mean, c->half_width);
    return std::string(b);
  };
  auto ks = [](const std::optional<KsResult>& k) {
    if (!k) return std::string("-");
    char b[32];
    std::snprintf(b, sizeof(b), "%.3f%s", k->d, k->degenerate ? "*" : "");
    return std::string(b);
  };
  for (const auto& q : report.questions) {
    std::string p = "-";
    if (q.rank_sum) {
      std::snprintf(buf, sizeof(buf), "%.3f (%s)", q.rank_sum->p_value,
                    std::string(to_string(q.rank_sum->method)).c_str());
      p = buf;
    }
    std::snprintf(buf, sizeof(buf), "Q%-3d %5zu %5zu  %-16s %-16s %-22s %s / %s\n", q.question,
                  q.n_baseline, q.n_finetuned, ci(q.baseline).c_str(), ci(q.finetuned).c_str(),
                  p.c_str(), ks(q.ks_baseline).c_str(), ks(q.ks_finetuned).c_str());
    out += buf;
    for (const auto& g : q.gaps) out += "     gap: " + g + "\n";
  }
  std::snprintf(buf, sizeof(buf), "Intervals at %.0f%% confidence; * marks a zero-variance sample.\n",
                report.confidence * 100.0);
  out += buf;
  return out;
}

std::string format_report_json(const AnalysisReport& report) {
  using nlohmann::json;
  json questions = json::array();
  auto ci = [](const std::optional<ConfidenceInterval>& c) -> json {
    if (!c) return nullptr;
    return {{"mean", c->mean}, {"half_width", c->half_width}};
  };
  auto ks = [](const std::optional<KsResult>& k) -> json {
    if (!k) return nullptr;
    return {{"d", k->d}, {"p_value", k->p_value}, {"degenerate", k->degenerate}};
  };
  for (const auto& q : report.questions) {
    json rank = nullptr;
    if (q.rank_sum) {
      rank = {{"rank_sum_baseline", q.rank_sum->rank_sum_a},
              {"p_value", q.rank_sum->p_value},
              {"method", to_string(q.rank_sum->method)}};
    }
    questions.push_back({{"question", "Q" + std::to_string(q.question)},
                         {"n_baseline", q.n_baseline},
                         {"n_finetuned", q.n_finetuned},
                         {"baseline", ci(q.baseline)},
                         {"finetuned", ci(q.finetuned)},
                         {"rank_sum", std::move(rank)},
                         {"ks_baseline", ks(q.ks_baseline)},
                         {"ks_finetuned", ks(q.ks_finetuned)},
                         {"gaps", q.gaps}});
  }
  json doc = {{"confidence", report.confidence}, {"questions", std::move(questions)}};
  return doc.dump(2) + '\n';
}

}  // namespace sv2svt::stats
