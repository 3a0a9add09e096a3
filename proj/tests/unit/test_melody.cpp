#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sv2svt/error.hpp"
#include "sv2svt/melody.hpp"

using namespace sv2svt;

namespace {

Micros s(double seconds) { return Micros::from_seconds(seconds); }

}  // namespace

TEST_CASE("contour rows") {
  auto one = parse_contour("0.00,440.0\n");
  REQUIRE(one.size() == 1);
  CHECK(one[0].voiced());
  CHECK(one[0].f0_hz == 440.0);

  auto unvoiced = parse_contour("0.00,0\n");
  REQUIRE(unvoiced.size() == 1);
  CHECK_FALSE(unvoiced[0].voiced());

  auto sorted = parse_contour("0.01,440.0\n0.00,220.0\n");
  REQUIRE(sorted.size() == 2);
  CHECK(sorted[0].time == s(0.00));
  CHECK(sorted[1].time == s(0.01));
}

TEST_CASE("contour header, duplicates and errors") {
  CHECK(parse_contour("time_s,f0_hz\n0.00,100\n").size() == 1);
  CHECK(parse_contour("0.00,100\n0.00,100\n").size() == 1);
  CHECK_THROWS_AS(parse_contour("0.00,100\n0.00,200\n"), ParseError);
  CHECK_THROWS_AS(parse_contour("0.00,-1\n"), ParseError);
  CHECK_THROWS_AS(parse_contour("-0.01,100\n"), ParseError);
  CHECK_THROWS_AS(parse_contour("0.00,nan\n"), ParseError);
  CHECK_THROWS_AS(parse_contour("0.00\n"), ParseError);
  CHECK_THROWS_AS(parse_contour("0.00,100\ntime,f0\n"), ParseError);
}

TEST_CASE("contour write then parse") {
  const std::vector<PitchFrame> frames{{s(0.0), 0.0}, {s(0.01), 261.6255653005986}, {s(0.02), 440.0}};
  const auto back = parse_contour(write_contour(frames));
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].time == frames[i].time);
    CHECK(back[i].f0_hz == frames[i].f0_hz);
  }
}

TEST_CASE("hz_to_midi reference points") {
  CHECK(hz_to_midi(440.0) == 69.0);
  CHECK(std::fabs(hz_to_midi(261.6255653) - 60.0) < 1e-6);
  CHECK(std::fabs(hz_to_midi(220.0) - 57.0) < 1e-12);
  CHECK_THROWS_AS(hz_to_midi(0.0), DomainError);
  CHECK_THROWS_AS(hz_to_midi(-5.0), DomainError);
  CHECK_THROWS_AS(hz_to_midi(INFINITY), DomainError);
}

TEST_CASE("octave, monotonicity and midi round trip") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> logf(std::log(20.0), std::log(4000.0));
  std::uniform_real_distribution<double> dev(-24.0, 24.0);
  double prev_f = 0.0;
  double prev_m = -1e9;
  std::vector<double> fs;
  for (int i = 0; i < 1000; ++i) fs.push_back(std::exp(logf(rng)));
  std::sort(fs.begin(), fs.end());
  for (double f : fs) {
    CHECK(std::fabs(hz_to_midi(2 * f) - hz_to_midi(f) - 12.0) < 1e-9);
    const double m = hz_to_midi(f);
    if (f > prev_f) CHECK(m > prev_m);
    prev_f = f;
    prev_m = m;
    const double d = dev(rng);
    CHECK(std::fabs(hz_to_midi(midi_to_hz(d + kBasePitch)) - kBasePitch - d) < 1e-9);
  }
}

TEST_CASE("deviation examples") {
  auto c = contour_to_deviation(std::vector<PitchFrame>{{s(0.0), 261.6255653}});
  REQUIRE(c.points.size() == 1);
  CHECK(c.points[0].time == s(0.0));
  CHECK(std::fabs(c.points[0].semitones) < 1e-6);

  c = contour_to_deviation(std::vector<PitchFrame>{{s(0.0), 440.0}});
  CHECK(c.points[0].semitones == doctest::Approx(9.0));

  c = contour_to_deviation(std::vector<PitchFrame>{{s(0.00), 440.0}, {s(0.01), 0.0}, {s(0.02), 440.0}});
  REQUIRE(c.points.size() == 2);
  CHECK(c.points[0].time == s(0.00));
  CHECK(c.points[1].time == s(0.02));
  CHECK(c.value_at(s(0.01)) == doctest::Approx(9.0));
}

TEST_CASE("deviation errors") {
  CHECK_THROWS_AS(contour_to_deviation(std::vector<PitchFrame>{{s(0.0), 0.0}}), EmptyMelodyError);
  CHECK_THROWS_AS(contour_to_deviation(std::vector<PitchFrame>{}), EmptyMelodyError);
  CHECK_THROWS_AS(contour_to_deviation(std::vector<PitchFrame>{{s(0.1), 100.0}, {s(0.1), 100.0}}),
                  ValidationError);
}

TEST_CASE("hold rule over every voicing pattern of eight frames") {
  for (unsigned mask = 1; mask < 256; ++mask) {
    std::vector<PitchFrame> frames;
    for (int i = 0; i < 8; ++i) {
      const bool voiced = (mask >> i) & 1u;
      frames.push_back({Micros(10000 * i), voiced ? 110.0 * (i + 1) : 0.0});
    }
    const auto curve = contour_to_deviation(frames);
    std::vector<oracle::CurvePoint> ref;
    for (const auto& f : frames) {
      if (f.voiced()) ref.push_back({f.time.count(), 12.0 * std::log2(f.f0_hz / 440.0) + 9.0});
    }
    REQUIRE(curve.points.size() == ref.size());
    CHECK(curve.points.front().time >= frames.front().time);
    CHECK(curve.points.back().time <= frames.back().time);
    for (std::int64_t t = -5000; t <= 85000; t += 2500) {
      CHECK(curve.value_at(Micros(t)) == doctest::Approx(oracle::hold_value(ref, t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("median smoothing") {
  std::vector<PitchFrame> frames{{s(0.00), 220.0}, {s(0.01), 220.0}, {s(0.02), 880.0},
                                 {s(0.03), 0.0},   {s(0.04), 220.0}, {s(0.05), 220.0}};
  const auto smoothed = median_smooth(frames, 3);
  CHECK(smoothed[2].f0_hz == doctest::Approx(220.0));
  CHECK_FALSE(smoothed[3].voiced());
  CHECK(smoothed[0].f0_hz == doctest::Approx(220.0));
  CHECK(median_smooth(frames, 1)[2].f0_hz == 880.0);
  CHECK_THROWS_AS(median_smooth(frames, 4), DomainError);
}

TEST_CASE("value_at on an empty curve") { CHECK(DeviationCurve{}.value_at(s(1.0)) == 0.0); }
