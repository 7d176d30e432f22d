#pragma once

// Small statistics toolkit: moments, confidence bounds, binomial intervals,
// least squares and a counter-based bootstrap.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/normal.hpp>

#include "dfpp/philox.hpp"

namespace dfpp::stats {

inline double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean: empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

/// Unbiased sample variance; 0 for a single observation.
inline double variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

inline double stderr_of_mean(std::span<const double> xs) {
  return std::sqrt(variance(xs) / static_cast<double>(xs.size()));
}

inline double normal_quantile(double p) { return boost::math::quantile(boost::math::normal(), p); }

/// One-sided lower bound mean - z_level * se.
inline double lower_confidence_bound(double m, double se, double level) { return m - normal_quantile(level) * se; }
inline double upper_confidence_bound(double m, double se, double level) { return m + normal_quantile(level) * se; }

struct Interval {
  double lo;
  double hi;
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Wilson score interval for a binomial proportion, two-sided at `level`.
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double level) {
  if (trials == 0) return {0.0, 1.0};
  const double z = normal_quantile(0.5 + level / 2.0);
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double denom = 1.0 + z * z / n;
  const double centre = (phat + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z * z / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

/// Exact (Clopper-Pearson) interval, two-sided at `level`.
inline Interval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double level) {
  if (trials == 0) return {0.0, 1.0};
  const double alpha = 1.0 - level;
  const auto k = static_cast<double>(successes);
  const auto n = static_cast<double>(trials);
  const double lo = successes == 0 ? 0.0 : boost::math::quantile(boost::math::beta_distribution<>(k, n - k + 1), alpha / 2);
  const double hi =
      successes == trials ? 1.0 : boost::math::quantile(boost::math::beta_distribution<>(k + 1, n - k), 1 - alpha / 2);
  return {lo, hi};
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

inline LinearFit least_squares(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("least_squares: need >= 2 paired points");
  const double mx = mean(xs), my = mean(ys);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("least_squares: degenerate abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

/// Percentile bootstrap of the sample mean; resampling indices come from a
/// counter stream so the interval is reproducible.
struct BootstrapResult {
  double estimate;
  double stderr_;
  Interval ci;
};

inline BootstrapResult bootstrap_mean(std::span<const double> xs, int resamples, double level, std::uint64_t seed,
                                      std::uint32_t tag) {
  const double est = mean(xs);
  rng::CounterStream stream(seed, tag, rng::Stream::kBootstrap);
  std::vector<double> means(static_cast<std::size_t>(resamples));
  for (double& m : means) {
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) s += xs[stream.below(xs.size())];
    m = s / static_cast<double>(xs.size());
  }
  std::sort(means.begin(), means.end());
  const auto pick = [&](double q) {
    const auto idx = static_cast<std::size_t>(std::clamp(q * (resamples - 1), 0.0, double(resamples - 1)));
    return means[idx];
  };
  const double alpha = 1.0 - level;
  return {est, std::sqrt(variance(means)), {pick(alpha / 2), pick(1 - alpha / 2)}};
}

}  // namespace dfpp::stats
