#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "support.hpp"

using namespace ccgraph;

namespace {

// Nominal statistic: distance of a 3-d standard normal draw from the origin.
double nominal_draw(Rng &rng) {
  const double a = normal01(rng), b = normal01(rng), c = normal01(rng);
  return std::sqrt(a * a + b * b + c * c);
}

std::vector<double> nominal_sample(Rng &rng, std::size_t n, double shift = 0.0) {
  std::vector<double> v(n);
  for (auto &x : v)
    x = nominal_draw(rng) + shift;
  return v;
}

} // namespace

TEST(Quantile, LinearInterpolation) {
  std::vector<double> grid(100);
  std::iota(grid.begin(), grid.end(), 1.0);
  EXPECT_DOUBLE_EQ(quantile(grid, 0.75), 75.25);
  EXPECT_DOUBLE_EQ(quantile(grid, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile(grid, 1.0), 100.0);
  const std::vector<double> two{3.0, 1.0};
  EXPECT_DOUBLE_EQ(quantile(two, 0.5), 2.0);
  EXPECT_THROW(quantile(std::vector<double>{}, 0.5), DomainError);
  EXPECT_THROW(quantile(two, 1.5), DomainError);
}

TEST(Cusum, Examples) {
  const double q = 0.7;
  EXPECT_EQ(cusum_update({}, q, q).S, 0.0);
  CusumState s;
  for (int i = 0; i < 5; ++i)
    s = cusum_update(s, q + 1.0, q);
  EXPECT_DOUBLE_EQ(s.S, 5.0);
  EXPECT_EQ(s.t, 5u);
  EXPECT_EQ(cusum_update({3.0, 7}, q - 10.0, q).S, 0.0);
}

TEST(Cusum, DetectChangeExamples) {
  CusumConfig cfg{0.5, 4.5, 0.99};
  EXPECT_TRUE(detect_change(std::vector<double>(50, 0.4), cfg).empty());
  const auto alarms = detect_change(std::vector<double>(20, 1.5), cfg);
  EXPECT_EQ(alarms, (std::vector<std::size_t>{5, 10, 15, 20}));
  EXPECT_THROW(detect_change(std::vector<double>{1.0}, CusumConfig{0.0, 0.0, 0.5}),
               DomainError);
}

TEST(Cusum, ChangeDelay) {
  Rng rng(3);
  const auto train = nominal_sample(rng, 5000);
  const auto cfg = calibrate(train, 0.99);
  auto stream = nominal_sample(rng, 500);
  const auto shifted = nominal_sample(rng, 500, 2.0);
  stream.insert(stream.end(), shifted.begin(), shifted.end());
  const auto alarms = detect_change(stream, cfg);
  const auto run = evaluate_run(alarms, 500, 1000);
  EXPECT_GE(run.arl1, 1.0);
  EXPECT_LT(run.arl1, 10.0);
  EXPECT_TRUE(run.detected());
}

TEST(Anomaly, Examples) {
  EXPECT_FALSE(detect_anomaly(2.0, 2.0));
  EXPECT_TRUE(detect_anomaly(std::nextafter(2.0, 3.0), 2.0));
  Rng rng(4);
  const auto train = nominal_sample(rng, 10000);
  const double h = calibrate_anomaly_threshold(train, 0.99);
  const auto test = nominal_sample(rng, 10000);
  const auto hits = std::count_if(test.begin(), test.end(),
                                  [&](double e) { return detect_anomaly(e, h); });
  EXPECT_NEAR(static_cast<double>(hits) / 1e4, 0.01, 0.005);
}

TEST(Calibrate, QuartileAndErrors) {
  std::vector<double> grid(100);
  std::iota(grid.begin(), grid.end(), 1.0);
  const auto cfg = calibrate(grid, 0.99);
  EXPECT_NEAR(cfg.q, 75.0, 0.5);
  EXPECT_GT(cfg.h, 0.0);
  EXPECT_THROW(calibrate(std::vector<double>(50, 3.0), 0.99), DomainError);
  EXPECT_THROW(calibrate(std::vector<double>(10, 1.0), 0.99), DomainError);
  EXPECT_THROW(calibrate(grid, 1.0), DomainError);
  CalibrationOptions cond;
  cond.mode = ThresholdMode::conditional;
  EXPECT_THROW(calibrate(std::vector<double>(50, 3.0), 0.99, cond), DomainError);
}

TEST(Calibrate, Deterministic) {
  Rng rng(5);
  const auto train = nominal_sample(rng, 300);
  const auto a = calibrate(train, 0.99);
  const auto b = calibrate(train, 0.99);
  EXPECT_EQ(a.q, b.q);
  EXPECT_EQ(a.h, b.h);
}

TEST(Calibrate, ConditionalThresholdIsLower) {
  // The per-step conditional quantile ignores accumulation across steps and
  // gives a lower threshold than the run-length fit.
  Rng rng(6);
  const auto train = nominal_sample(rng, 2000);
  CalibrationOptions cond;
  cond.mode = ThresholdMode::conditional;
  EXPECT_LT(calibrate(train, 0.99, cond).h, calibrate(train, 0.99).h);
}

TEST(Calibrate, NominalArlMatchesTarget) {
  // Self-consistency: a stream drawn from the training distribution raises
  // false alarms every 1/(1-alpha) = 100 steps on average.
  Rng rng(7);
  const auto train = nominal_sample(rng, 20000);
  const auto cfg = calibrate(train, 0.99);
  std::vector<RunOutcome> runs;
  for (int r = 0; r < 200; ++r) {
    const auto stream = nominal_sample(rng, 2000);
    const auto a = detect_change(stream, cfg);
    runs.push_back(evaluate_run(a, 2000, 2000));
  }
  const auto m = compute_run_metrics(runs, 2000, 1);
  EXPECT_TRUE(m.arl0_ci.contains(100.0)) << m.arl0_ci.lo << " " << m.arl0_ci.hi;
  EXPECT_NEAR(m.arl0, 100.0, 15.0);
}

TEST(RunMetrics, SegmentArl) {
  const std::vector<std::size_t> alarms{3, 7, 12};
  const auto s = segment_arl(alarms, 0, 12);
  EXPECT_DOUBLE_EQ(s.arl, 4.0);
  EXPECT_FALSE(s.censored);
  // Censored gap after the last alarm is dropped.
  EXPECT_DOUBLE_EQ(segment_arl(alarms, 0, 20).arl, 4.0);
  const auto none = segment_arl(alarms, 12, 30);
  EXPECT_DOUBLE_EQ(none.arl, 18.0);
  EXPECT_TRUE(none.censored);
  // Post-change: first delay measured from the change time.
  const std::vector<std::size_t> post{3, 103, 106, 110};
  const auto run = evaluate_run(post, 100, 200);
  EXPECT_DOUBLE_EQ(run.arl0, 3.0);
  EXPECT_DOUBLE_EQ(run.arl1, 10.0 / 3.0);
  EXPECT_FALSE(run.detected());
  EXPECT_THROW(evaluate_run(post, 300, 200), DomainError);
}

TEST(RunMetrics, Aggregates) {
  std::vector<RunOutcome> runs(100, RunOutcome{150.0, 4.0, false, false});
  const auto m = compute_run_metrics(runs);
  EXPECT_EQ(m.dcr, 1.0);
  EXPECT_EQ(m.dcr_ci.lo, 1.0);
  EXPECT_EQ(m.arl0, 150.0);
  EXPECT_EQ(m.runs, 100u);
  runs[0].arl0 = 2.0;
  EXPECT_DOUBLE_EQ(compute_run_metrics(runs).dcr, 0.99);
  EXPECT_THROW(compute_run_metrics(std::vector<RunOutcome>{}), DomainError);

  const std::vector<std::vector<std::size_t>> alarms{{3, 7, 12, 14}, {}};
  const auto m2 = compute_run_metrics(alarms, {12, 12}, {24, 24}, 200, 0);
  EXPECT_DOUBLE_EQ(m2.arl0, (4.0 + 12.0) / 2.0);
  EXPECT_DOUBLE_EQ(m2.arl1, (2.0 + 12.0) / 2.0);
  EXPECT_DOUBLE_EQ(m2.dcr, 0.5);
  EXPECT_EQ(m2.censored_nominal, 1u);
  EXPECT_THROW(compute_run_metrics(alarms, {12}, {24, 24}), DimensionError);
}

// ---- properties ----

TEST(CusumProperty, Floor) {
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    CusumState s;
    const double q = uniform(rng, -1.0, 1.0);
    for (int t = 0; t < 200; ++t) {
      s = cusum_update(s, 3.0 * normal01(rng), q);
      ASSERT_GE(s.S, 0.0);
    }
  }
}

TEST(CusumProperty, Monotonicity) {
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const CusumConfig cfg{uniform(rng, 0.0, 1.0), uniform(rng, 1.0, 5.0), 0.99};
    std::vector<double> lo(300), hi(300);
    for (std::size_t t = 0; t < lo.size(); ++t) {
      lo[t] = normal01(rng);
      hi[t] = lo[t] + (uniform01(rng) < 0.3 ? uniform(rng, 0.0, 1.0) : 0.0);
    }
    CusumState a, b;
    for (std::size_t t = 0; t < lo.size(); ++t) {
      a = cusum_update(a, lo[t], cfg.q);
      b = cusum_update(b, hi[t], cfg.q);
      ASSERT_LE(a.S, b.S);
    }
    const auto al = detect_change(lo, cfg);
    const auto ah = detect_change(hi, cfg);
    if (!al.empty()) {
      ASSERT_FALSE(ah.empty());
      EXPECT_LE(ah.front(), al.front());
    }
  }
}

TEST(CusumProperty, ScaleContract) {
  Rng rng(10);
  for (int i = 0; i < 200; ++i) {
    // Powers of two keep the scaled arithmetic exact.
    const double c = std::ldexp(1.0, static_cast<int>(uniform_index(rng, 9)) - 4);
    const CusumConfig cfg{uniform(rng, 0.0, 1.0), uniform(rng, 1.0, 5.0), 0.99};
    const CusumConfig scaled{c * cfg.q, c * cfg.h, cfg.alpha};
    std::vector<double> e(300), ec(300);
    CusumState a, b;
    for (std::size_t t = 0; t < e.size(); ++t) {
      e[t] = 1.5 * normal01(rng) + 0.5;
      ec[t] = c * e[t];
      a = cusum_update(a, e[t], cfg.q);
      b = cusum_update(b, ec[t], scaled.q);
      ASSERT_DOUBLE_EQ(b.S, c * a.S);
    }
    EXPECT_EQ(detect_change(e, cfg), detect_change(ec, scaled));
  }
}

TEST(CusumProperty, CalibrationScaleEquivariance) {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto train = nominal_sample(rng, 100);
    std::vector<double> scaled(train);
    for (auto &v : scaled)
      v *= 4.0;
    CalibrationOptions o;
    o.bootstrap = 100;
    const auto a = calibrate(train, 0.99, o);
    const auto b = calibrate(scaled, 0.99, o);
    EXPECT_NEAR(b.q, 4.0 * a.q, 1e-12);
    EXPECT_NEAR(b.h, 4.0 * a.h, 1e-9 * b.h);
  }
}
