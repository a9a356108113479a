#pragma once

// Small exact statistics used to turn simulation counts into confidence
// statements: binomial tails, Clopper-Pearson bounds, sample quantiles and
// their order-statistic confidence intervals.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "erasurelab/error.hpp"
#include "erasurelab/specfun.hpp"

namespace erasurelab::stats {

inline constexpr double kConfidence = 0.99;
// Standard normal 0.99 quantile.
inline constexpr double kZ99 = 2.3263478740408408;

namespace detail {

inline double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace detail

/// P(X <= k) for X ~ Binomial(n, p), summed in log space.
inline double binomial_cdf(std::uint64_t k, std::uint64_t n, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binomial_cdf: p must lie in [0, 1]");
  if (k >= n) return 1.0;
  if (p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  double log_pmf = static_cast<double>(n) * lq;  // i = 0
  double acc = log_pmf;
  for (std::uint64_t i = 0; i < k; ++i) {
    log_pmf += std::log(static_cast<double>(n - i)) - std::log(static_cast<double>(i + 1)) + lp - lq;
    acc = detail::log_add(acc, log_pmf);
  }
  return std::min(1.0, std::exp(acc));
}

/// One-sided Clopper-Pearson upper bound: the p with P(X <= events) = 1 - confidence.
inline double clopper_pearson_upper(std::uint64_t events, std::uint64_t trials, double confidence = kConfidence) {
  if (trials == 0) throw DomainError("clopper_pearson_upper: trials must be >= 1");
  if (events >= trials) return 1.0;
  const double alpha = 1.0 - confidence;
  double lo = static_cast<double>(events) / static_cast<double>(trials);
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (binomial_cdf(events, trials, mid) > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

/// One-sided Clopper-Pearson lower bound: the p with P(X >= events) = 1 - confidence.
inline double clopper_pearson_lower(std::uint64_t events, std::uint64_t trials, double confidence = kConfidence) {
  if (trials == 0) throw DomainError("clopper_pearson_lower: trials must be >= 1");
  if (events == 0) return 0.0;
  const double alpha = 1.0 - confidence;
  double lo = 0.0;
  double hi = static_cast<double>(events) / static_cast<double>(trials);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (1.0 - binomial_cdf(events - 1, trials, mid) < alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

/// Sample quantile of sorted data by linear interpolation between order
/// statistics (position (n-1)p, 0-based).
inline double quantile_sorted(std::span<const double> sorted, double level) {
  if (sorted.empty()) throw DomainError("quantile_sorted: empty sample");
  if (!(level >= 0.0 && level <= 1.0)) throw DomainError("quantile_sorted: level must lie in [0, 1]");
  const double pos = level * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return frac == 0.0 ? sorted[lo] : sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

struct QuantileInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Distribution-free two-sided interval for the level-quantile from order
/// statistics: [x_(l), x_(u)] with Binomial(n, level) coverage >= confidence.
inline QuantileInterval quantile_interval_sorted(std::span<const double> sorted, double level,
                                                 double confidence = kConfidence) {
  if (sorted.empty()) throw DomainError("quantile_interval_sorted: empty sample");
  const std::uint64_t n = sorted.size();
  const double tail = 0.5 * (1.0 - confidence);
  // l: largest rank with P(B <= l - 1) <= tail; u: smallest rank with P(B <= u - 1) >= 1 - tail.
  std::uint64_t l = 0;
  std::uint64_t u = n + 1;
  if (level <= 0.0 || level >= 1.0) {
    l = level <= 0.0 ? 1 : n;
    u = l;
  } else {
    const double lp = std::log(level);
    const double lq = std::log1p(-level);
    double log_pmf = static_cast<double>(n) * lq;
    double log_cdf = log_pmf;  // ln P(B <= r - 1) for r = 1
    for (std::uint64_t r = 1; r <= n; ++r) {
      const double cdf = std::exp(log_cdf);
      if (cdf <= tail) l = r;
      if (cdf >= 1.0 - tail) {
        u = r;
        break;
      }
      const std::uint64_t i = r - 1;
      log_pmf += std::log(static_cast<double>(n - i)) - std::log(static_cast<double>(i + 1)) + lp - lq;
      log_cdf = detail::log_add(log_cdf, log_pmf);
    }
  }
  QuantileInterval iv;
  iv.lo = l == 0 ? -std::numeric_limits<double>::infinity() : sorted[l - 1];
  iv.hi = u > n ? std::numeric_limits<double>::infinity() : sorted[u - 1];
  return iv;
}

struct MeanEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

inline MeanEstimate mean_and_se(std::span<const double> values) {
  if (values.empty()) throw DomainError("mean_and_se: empty sample");
  double sum = 0.0;
  for (const double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(values.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(values.size()))};
}

}  // namespace erasurelab::stats
