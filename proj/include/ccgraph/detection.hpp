#pragma once

// CUSUM change detection and one-shot anomaly detection on a scalar
// monitoring statistic, threshold calibration, and ARL/DCR evaluation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ccgraph/error.hpp"
#include "ccgraph/random.hpp"
#include "ccgraph/stats.hpp"

namespace ccgraph {

struct CusumConfig {
  double q = 0.0;     // drift subtracted from every observation
  double h = 0.0;     // alarm threshold on S
  double alpha = 0.99; // confidence level used for calibration

  void validate() const {
    if (!(h > 0.0) || !std::isfinite(h))
      throw DomainError("CUSUM threshold must be positive and finite");
    if (!(alpha > 0.0 && alpha < 1.0))
      throw DomainError("alpha must lie in (0, 1)");
  }
};

struct CusumState {
  double S = 0.0;
  std::size_t t = 0;
};

// S_t = max{0, S_{t-1} + (e_t - q)}
inline CusumState cusum_update(CusumState state, double e, double q) {
  state.S = std::max(0.0, state.S + (e - q));
  ++state.t;
  return state;
}

enum class ThresholdMode {
  // h chosen so that the bootstrap stream raises alarms at rate 1 - alpha,
  // i.e. a nominal ARL of 1/(1 - alpha).
  run_length,
  // h is the alpha-quantile of S_t over steps that start from S_{t-1} = 0.
  conditional,
};

inline const char *to_string(ThresholdMode m) {
  return m == ThresholdMode::run_length ? "run_length" : "conditional";
}

struct CalibrationOptions {
  ThresholdMode mode = ThresholdMode::run_length;
  int bootstrap = 2000;
  std::uint64_t seed = 0;
  double drift_quantile = 0.75;
};

namespace detail {

inline std::size_t count_alarms(std::span<const double> increments, double h) {
  double s = 0.0;
  std::size_t alarms = 0;
  for (double inc : increments) {
    s = std::max(0.0, s + inc);
    if (s > h) {
      ++alarms;
      s = 0.0;
    }
  }
  return alarms;
}

} // namespace detail

// q is the drift quantile (third quartile by default) of the training
// statistic; h is fitted on B bootstrap resamples of the training sample
// run back to back through the CUSUM recursion.
inline CusumConfig calibrate(std::span<const double> e_train, double alpha,
                             const CalibrationOptions &opts = {}) {
  if (e_train.size() < 20)
    throw DomainError("calibration needs at least 20 training values");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("alpha must lie in (0, 1)");
  if (opts.bootstrap < 1)
    throw DomainError("bootstrap count must be positive");

  CusumConfig cfg;
  cfg.alpha = alpha;
  cfg.q = quantile(e_train, opts.drift_quantile);

  Rng rng(opts.seed);
  const std::size_t n = e_train.size();
  std::vector<double> inc(n * static_cast<std::size_t>(opts.bootstrap));
  for (auto &v : inc)
    v = e_train[uniform_index(rng, n)] - cfg.q;

  if (opts.mode == ThresholdMode::conditional) {
    std::vector<double> fresh;
    double s = 0.0;
    for (double v : inc) {
      const double next = std::max(0.0, s + v);
      if (s <= 0.0)
        fresh.push_back(next);
      s = next;
    }
    cfg.h = quantile(fresh, alpha);
  } else {
    double s = 0.0, peak = 0.0;
    for (double v : inc) {
      s = std::max(0.0, s + v);
      peak = std::max(peak, s);
    }
    const auto target = static_cast<std::size_t>(
        std::floor((1.0 - alpha) * static_cast<double>(inc.size())));
    // Smallest h whose alarm count does not exceed the target.
    double lo = 0.0, hi = peak;
    for (int it = 0; it < 100 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (detail::count_alarms(inc, mid) > target)
        lo = mid;
      else
        hi = mid;
    }
    cfg.h = hi;
  }
  if (!(cfg.h > 0.0))
    throw DomainError("degenerate training statistic: calibrated threshold "
                      "is zero");
  return cfg;
}

// Alarm times (1-based) of the CUSUM over the stream; S resets to zero after
// every alarm.
inline std::vector<std::size_t> detect_change(std::span<const double> stream,
                                              const CusumConfig &cfg) {
  cfg.validate();
  std::vector<std::size_t> alarms;
  CusumState st;
  for (double e : stream) {
    st = cusum_update(st, e, cfg.q);
    if (st.S > cfg.h) {
      alarms.push_back(st.t);
      st.S = 0.0;
    }
  }
  return alarms;
}

inline bool detect_anomaly(double e, double h) { return e > h; }

// Anomaly threshold: the alpha-quantile of the nominal statistic.
inline double calibrate_anomaly_threshold(std::span<const double> e_train,
                                          double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("alpha must lie in (0, 1)");
  return quantile(e_train, alpha);
}

struct SegmentArl {
  double arl = 0.0;
  // true when the segment raised no alarm and arl is its length
  bool censored = false;
};

// Mean gap between consecutive alarms inside (start, end], the first gap
// measured from start. The censored gap after the last alarm is dropped.
inline SegmentArl segment_arl(std::span<const std::size_t> alarms,
                              std::size_t start, std::size_t end) {
  std::size_t last = start, count = 0;
  for (std::size_t a : alarms) {
    if (a <= start || a > end)
      continue;
    last = a;
    ++count;
  }
  if (count == 0)
    return {static_cast<double>(end - start), true};
  return {static_cast<double>(last - start) / static_cast<double>(count),
          false};
}

struct RunOutcome {
  double arl0 = 0.0;
  double arl1 = 0.0;
  bool arl0_censored = false;
  bool arl1_censored = false;

  bool detected() const { return arl0 > arl1; }
};

// Splits one operational stream at the change time: ARL0 over (0, change],
// ARL1 over (change, length].
inline RunOutcome evaluate_run(std::span<const std::size_t> alarms,
                               std::size_t change_time, std::size_t length) {
  if (change_time > length)
    throw DomainError("change time beyond the stream");
  const SegmentArl nominal = segment_arl(alarms, 0, change_time);
  const SegmentArl changed = segment_arl(alarms, change_time, length);
  return {nominal.arl, changed.arl, nominal.censored, changed.censored};
}

struct RunMetrics {
  double arl0 = 0.0;
  double arl1 = 0.0;
  double dcr = 0.0;
  Interval arl0_ci;
  Interval arl1_ci;
  Interval dcr_ci;
  std::size_t runs = 0;
  std::size_t censored_nominal = 0;
  std::size_t censored_change = 0;
};

// Aggregates runs: mean ARL0, mean ARL1, detected change rate, each with a
// percentile-bootstrap 95% interval over runs.
inline RunMetrics compute_run_metrics(std::span<const RunOutcome> runs,
                                      int resamples = 2000,
                                      std::uint64_t seed = 0) {
  if (runs.empty())
    throw DomainError("no runs to aggregate");
  std::vector<double> a0, a1, hit;
  RunMetrics m;
  for (const auto &r : runs) {
    a0.push_back(r.arl0);
    a1.push_back(r.arl1);
    hit.push_back(r.detected() ? 1.0 : 0.0);
    m.censored_nominal += r.arl0_censored ? 1 : 0;
    m.censored_change += r.arl1_censored ? 1 : 0;
  }
  m.runs = runs.size();
  m.arl0 = mean(a0);
  m.arl1 = mean(a1);
  m.dcr = mean(hit);
  m.arl0_ci = bootstrap_mean_ci(a0, resamples, mix_seed(seed, 0));
  m.arl1_ci = bootstrap_mean_ci(a1, resamples, mix_seed(seed, 1));
  m.dcr_ci = bootstrap_mean_ci(hit, resamples, mix_seed(seed, 2));
  return m;
}

inline RunMetrics compute_run_metrics(
    const std::vector<std::vector<std::size_t>> &alarms,
    const std::vector<std::size_t> &change_times,
    const std::vector<std::size_t> &lengths, int resamples = 2000,
    std::uint64_t seed = 0) {
  if (alarms.size() != change_times.size() || alarms.size() != lengths.size())
    throw DimensionError("per-run inputs differ in length");
  std::vector<RunOutcome> runs;
  for (std::size_t i = 0; i < alarms.size(); ++i)
    runs.push_back(evaluate_run(alarms[i], change_times[i], lengths[i]));
  return compute_run_metrics(runs, resamples, seed);
}

} // namespace ccgraph
