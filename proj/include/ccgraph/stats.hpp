#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "ccgraph/error.hpp"
#include "ccgraph/random.hpp"

namespace ccgraph {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return lo <= v && v <= hi; }
};

// Sample quantile with linear interpolation between order statistics
// (Hyndman-Fan type 7, the R and NumPy default).
inline double quantile(std::span<const double> values, double p) {
  if (values.empty())
    throw DomainError("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0))
    throw DomainError("quantile level must lie in [0, 1]");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline double mean(std::span<const double> values) {
  if (values.empty())
    throw DomainError("mean of an empty sample");
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

// Percentile bootstrap interval for the mean.
inline Interval bootstrap_mean_ci(std::span<const double> values,
                                  int resamples, std::uint64_t seed,
                                  double level = 0.95) {
  if (values.empty())
    throw DomainError("bootstrap of an empty sample");
  Rng rng(seed);
  std::vector<double> means(static_cast<std::size_t>(resamples));
  for (auto &m : means) {
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      sum += values[uniform_index(rng, values.size())];
    m = sum / static_cast<double>(values.size());
  }
  const double tail = 0.5 * (1.0 - level);
  return {quantile(means, tail), quantile(means, 1.0 - tail)};
}

} // namespace ccgraph
