#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sv2svt::stats {

struct ConfidenceInterval {
  double mean = 0.0;
  double half_width = 0.0;
};

/// Two-sided Student-t interval: mean +/- t(n-1, (1+c)/2) * s / sqrt(n),
/// with s the sample standard deviation. Needs at least two scores.
ConfidenceInterval mean_ci(std::span<const double> scores, double confidence = 0.95);

/// Quantile of Student's t with `dof` degrees of freedom.
double student_t_quantile(double probability, double dof);

enum class PValueMethod { kExact, kNormalApprox };

std::string_view to_string(PValueMethod method) noexcept;

/// Pooled sizes up to this use the exact permutation distribution.
inline constexpr std::size_t kExactRankSumLimit = 12;

struct RankSumResult {
  double rank_sum_a = 0.0;  // sum of mid-ranks of sample a in the pool
  double p_value = 1.0;     // two-sided
  PValueMethod method = PValueMethod::kExact;
};

/// Mid-ranks (1-based) of `values`, ties sharing the average rank.
std::vector<double> mid_ranks(std::span<const double> values);

/// Two-sided Wilcoxon rank-sum test. Exact when |a|+|b| <= 12, otherwise a
/// normal approximation with tie-corrected variance and continuity correction.
RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b);

struct KsResult {
  double d = 0.0;
  double p_value = 1.0;
  bool degenerate = false;  // zero-variance sample
};

/// Asymptotic Kolmogorov survival function P(K > lambda).
double kolmogorov_survival(double lambda);

/// D = sup |F_n - cdf| with p from the asymptotic Kolmogorov distribution.
KsResult ks_test(std::span<const double> sample, const std::function<double(double)>& cdf);

/// KS against a Gaussian fitted with the sample mean and standard deviation.
/// Zero variance compares against a point mass and sets `degenerate`.
KsResult ks_normality(std::span<const double> sample);

// --- MOS tables ------------------------------------------------------------

enum class System { kBaseline, kFinetuned };

std::string_view to_string(System system) noexcept;

struct ScoreRow {
  std::string subject;
  System system = System::kBaseline;
  int question = 1;  // 1..6
  int score = 3;     // 1..5
};

struct ScoreTable {
  std::vector<ScoreRow> rows;

  std::vector<double> scores(System system, int question) const;
};

inline constexpr int kQuestionCount = 6;

/// `subject,system,question,score` with an optional header row. `question`
/// accepts "Q3" or "3"; `system` is baseline or finetuned.
ScoreTable parse_score_csv(std::string_view text);

struct QuestionReport {
  int question = 1;
  std::size_t n_baseline = 0;
  std::size_t n_finetuned = 0;
  std::optional<ConfidenceInterval> baseline;
  std::optional<ConfidenceInterval> finetuned;
  std::optional<RankSumResult> rank_sum;
  std::optional<KsResult> ks_baseline;
  std::optional<KsResult> ks_finetuned;
  std::vector<std::string> gaps;  // why a cell is empty
};

struct AnalysisReport {
  double confidence = 0.95;
  std::vector<QuestionReport> questions;
};

/// One row per question Q1-Q6: means with confidence intervals per system,
/// rank-sum p between systems, and KS normality per system. Cells that
/// cannot be computed stay empty and are explained in `gaps`.
AnalysisReport analyze(const ScoreTable& table, double confidence = 0.95);

std::string format_report_text(const AnalysisReport& report);
std::string format_report_json(const AnalysisReport& report);

}  // namespace sv2svt::stats
