#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <random>

#include "oracles.hpp"
#include "sv2svt/error.hpp"
#include "sv2svt/stats.hpp"

using namespace sv2svt;
using namespace sv2svt::stats;
using doctest::Approx;

// Reference values below were computed with scipy 1.15 (t.ppf, kstwobign.sf,
// mannwhitneyu with continuity correction, kstest in asymptotic mode).

TEST_CASE("confidence intervals") {
  const std::vector<double> xs{1, 2, 3};
  const auto ci = mean_ci(xs);
  CHECK(ci.mean == 2.0);
  CHECK(ci.half_width == Approx(4.302652729696142 / std::sqrt(3.0)).epsilon(1e-9));

  const std::vector<double> flat{2, 2, 2};
  const auto z = mean_ci(flat);
  CHECK(z.mean == 2.0);
  CHECK(z.half_width == 0.0);

  CHECK(student_t_quantile(0.995, 9) == Approx(3.2498355415921254).epsilon(1e-9));
  CHECK_THROWS_AS(mean_ci(std::vector<double>{4}), StatsError);
  CHECK_THROWS_AS(mean_ci(xs, 1.0), StatsError);
}

TEST_CASE("mid-ranks share ties") {
  const std::vector<double> v{10, 20, 20, 5, 20};
  CHECK(mid_ranks(v) == std::vector<double>{2, 4, 4, 1, 4});
}

TEST_CASE("exact rank-sum examples") {
  const std::vector<double> a{1, 2};
  const std::vector<double> b{3, 4};
  const auto r = wilcoxon_rank_sum(a, b);
  CHECK(r.method == PValueMethod::kExact);
  CHECK(r.rank_sum_a == 3.0);
  CHECK(r.p_value == Approx(1.0 / 3.0).epsilon(1e-12));

  const std::vector<double> same{3, 3};
  CHECK(wilcoxon_rank_sum(same, same).p_value == 1.0);
  CHECK_THROWS_AS(wilcoxon_rank_sum(std::vector<double>{}, b), StatsError);
}

TEST_CASE("exact rank-sum agrees with full enumeration") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> score(1, 5);
  for (std::size_t na = 1; na <= 5; ++na) {
    for (std::size_t nb = 1; nb <= 5; ++nb) {
      for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> a(na);
        std::vector<double> b(nb);
        for (auto& x : a) x = score(rng);
        for (auto& x : b) x = score(rng);
        const auto r = wilcoxon_rank_sum(a, b);
        CHECK(r.p_value == Approx(oracle::rank_sum_p(a, b)).epsilon(1e-12));
        CHECK(r.p_value >= 0.0);
        CHECK(r.p_value <= 1.0);
      }
    }
  }
}

TEST_CASE("normal approximation past the exact limit") {
  const std::vector<double> a{3, 4, 4, 5, 2, 3, 4, 5, 5, 1};
  const std::vector<double> b{4, 5, 5, 5, 3, 4, 5, 4, 5, 5, 2};
  const auto r = wilcoxon_rank_sum(a, b);
  CHECK(r.method == PValueMethod::kNormalApprox);
  CHECK(r.p_value == Approx(0.21967060623440393).epsilon(1e-9));

  const std::vector<double> flat(7, 3.0);
  const auto f = wilcoxon_rank_sum(flat, flat);
  CHECK(f.p_value == 1.0);
}

TEST_CASE("Kolmogorov survival") {
  CHECK(kolmogorov_survival(0.0) == 1.0);
  CHECK(kolmogorov_survival(0.5) == Approx(0.9639452436648751).epsilon(1e-10));
  CHECK(kolmogorov_survival(1.0) == Approx(0.26999967167735456).epsilon(1e-10));
  CHECK(kolmogorov_survival(1.18) == Approx(0.1234538094297657).epsilon(1e-10));
  CHECK(kolmogorov_survival(2.0) == Approx(0.0006709252557796953).epsilon(1e-9));
  double prev = 1.0;
  for (double l = 0.01; l < 4.0; l += 0.01) {
    const double q = kolmogorov_survival(l);
    CHECK(q <= prev + 1e-12);
    prev = q;
  }
}

TEST_CASE("KS statistic") {
  const std::vector<double> x{0.1, 0.5, -0.3, 1.2, 0.8};
  const auto r = ks_test(x, [](double v) { return 0.5 * std::erfc(-v / std::sqrt(2.0)); });
  CHECK(r.d == Approx(0.3820885778110474).epsilon(1e-12));
  CHECK(r.p_value == Approx(0.45869550064776987).epsilon(1e-9));
  CHECK_FALSE(r.degenerate);

  const auto flat = ks_normality(std::vector<double>{4, 4, 4});
  CHECK(flat.degenerate);
  CHECK(flat.d == 0.0);
  CHECK(flat.p_value == 1.0);
  CHECK(ks_normality(std::vector<double>{4}).degenerate);
}

TEST_CASE("score CSV parsing") {
  const auto t = parse_score_csv(
      "subject,system,question,score\n"
      "s1,baseline,Q1,3\r\n"
      "s1,finetuned,1,4\n"
      "\n"
      "s2,Fine-tuned,q1,5\n");
  REQUIRE(t.rows.size() == 3);
  CHECK(t.scores(System::kFinetuned, 1) == std::vector<double>{4, 5});
  CHECK(t.scores(System::kBaseline, 2).empty());

  auto line_of = [](const char* text) -> std::size_t {
    try {
      parse_score_csv(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("s,baseline,Q1,3\ns,baseline,Q1,6\n") == 2);
  CHECK(line_of("s,baseline,Q7,3\n") == 1);
  CHECK(line_of("s,other,Q1,3\n") == 1);
  CHECK(line_of("s,baseline,Q1\n") == 1);
  CHECK(line_of("s,baseline,Q1,x\ns,baseline,Q1,y\n") == 2);
}

TEST_CASE("analysis fills every question and explains gaps") {
  std::string csv = "subject,system,question,score\n";
  for (int s = 0; s < 4; ++s) {
    csv += "s" + std::to_string(s) + ",baseline,Q1," + std::to_string(2 + s % 2) + "\n";
    csv += "s" + std::to_string(s) + ",finetuned,Q1," + std::to_string(4 + s % 2) + "\n";
  }
  csv += "s0,baseline,Q2,3\n";
  const auto report = analyze(parse_score_csv(csv));
  REQUIRE(report.questions.size() == 6);
  const auto& q1 = report.questions[0];
  CHECK(q1.baseline->mean == 2.5);
  CHECK(q1.finetuned->mean == 4.5);
  CHECK(q1.rank_sum->method == PValueMethod::kExact);
  CHECK(q1.gaps.empty());
  const auto& q2 = report.questions[1];
  CHECK_FALSE(q2.baseline.has_value());
  CHECK_FALSE(q2.rank_sum.has_value());
  CHECK(q2.gaps.size() == 3);
  CHECK(report.questions[5].n_baseline == 0);

  const auto text = format_report_text(report);
  CHECK(text.find("Q1") != std::string::npos);
  CHECK(text.find("gap:") != std::string::npos);
  const auto doc = nlohmann::json::parse(format_report_json(report));
  CHECK(doc["questions"].size() == 6);
  CHECK(doc["questions"][0]["baseline"]["mean"] == 2.5);
  CHECK(doc["questions"][1]["rank_sum"].is_null());
}
