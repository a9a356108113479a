#pragma once

// Simulation harness: condition numbers of randomly (or adversarially)
// erased Gaussian frames, and empirical validation of every tail bound and
// certificate in pm1_bounds.hpp / gauss_frame_bounds.hpp.
//
// Determinism: trial i draws only from rng::stream_seed(master_seed, i), its
// result lands in slot i, and every reduction runs over slots in index order.
// Results are therefore bit-identical for any worker count.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "erasurelab/error.hpp"
#include "erasurelab/gauss_frame_bounds.hpp"
#include "erasurelab/matrix_lab.hpp"
#include "erasurelab/parallel.hpp"
#include "erasurelab/pm1_bounds.hpp"
#include "erasurelab/rng.hpp"
#include "erasurelab/stats.hpp"

namespace erasurelab::mc {

enum class ErasureMode {
  none,           // no rows removed
  random_subset,  // one uniform erasure per trial
  exhaustive,     // every erasure of the configured size (small sizes only)
  adversarial,    // worst case per test vector (SRIP/JL) or greedy row removal (NERF)
};

inline std::string_view to_string(ErasureMode m) noexcept {
  switch (m) {
    case ErasureMode::none: return "none";
    case ErasureMode::random_subset: return "random_subset";
    case ErasureMode::exhaustive: return "exhaustive";
    case ErasureMode::adversarial: return "adversarial";
  }
  return "none";
}

inline ErasureMode parse_erasure_mode(std::string_view s) {
  if (s == "none") return ErasureMode::none;
  if (s == "random_subset" || s == "random") return ErasureMode::random_subset;
  if (s == "exhaustive") return ErasureMode::exhaustive;
  if (s == "adversarial" || s == "greedy") return ErasureMode::adversarial;
  throw DomainError("unknown erasure mode '" + std::string(s) + "'");
}

struct SimConfig {
  Distribution distribution = Distribution::gaussian;
  std::size_t rows = 0;
  std::size_t cols = 0;
  double beta = 0.0;
  ErasureMode erasure_mode = ErasureMode::random_subset;
  std::size_t trials = 10000;
  std::uint64_t master_seed = 0;
  std::vector<double> quantiles{0.5, 0.9, 0.99};
  std::optional<std::size_t> workers;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;

  /// round(beta * rows), ties away from zero; 0 in mode none.
  [[nodiscard]] std::size_t erase_count() const {
    if (erasure_mode == ErasureMode::none) return 0;
    return static_cast<std::size_t>(std::llround(beta * static_cast<double>(rows)));
  }
};

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double s_min = 0.0;
  double s_max = 0.0;
  double cond = 0.0;
};

struct QuantileEstimate {
  double level = 0.0;
  double value = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

struct RangeStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

struct SimSummary {
  std::string kind;  // "nerf" or "square"
  SimConfig config;
  std::size_t erase_count = 0;
  std::size_t reduced_rows = 0;
  std::vector<TrialRecord> trials;
  std::vector<QuantileEstimate> quantiles;
  RangeStats s_min;
  RangeStats s_max;
  double cond_max = 0.0;
  double cond_median = 0.0;
  // (sqrt(a) + sqrt(b)) / (sqrt(a) - sqrt(b)) for the reduced a x b shape; NaN if a == b.
  double marchenko_pastur_cond = 0.0;
  double elapsed_seconds = 0.0;
};

/// Asymptotic condition number of an a x b Gaussian matrix from the
/// Marchenko-Pastur edges sqrt(a) +- sqrt(b).
inline double marchenko_pastur_cond(std::size_t a, std::size_t b) {
  if (a <= b) return std::numeric_limits<double>::quiet_NaN();
  const double ra = std::sqrt(static_cast<double>(a));
  const double rb = std::sqrt(static_cast<double>(b));
  return (ra + rb) / (ra - rb);
}

/// Per-trial erasure stream, derived from the trial seed.
inline std::uint64_t erasure_stream_seed(std::uint64_t trial_seed) { return rng::stream_seed(trial_seed, 1); }

namespace detail {

inline TrialRecord record(std::size_t i, std::uint64_t seed, const SingularExtremes& e) {
  return {i, seed, e.s_min, e.s_max, e.cond};
}

// Greedy adversary: repeatedly drop the row whose removal maximizes Cond.
inline SingularExtremes greedy_worst(const Matrix& a, std::size_t erase_count) {
  std::vector<std::size_t> erased;
  SingularExtremes worst = extreme_singular_values(a);
  for (std::size_t step = 0; step < erase_count; ++step) {
    std::size_t best_row = a.rows();
    SingularExtremes best{};
    best.cond = -1.0;
    for (std::size_t r = 0; r < static_cast<std::size_t>(a.rows()); ++r) {
      if (std::find(erased.begin(), erased.end(), r) != erased.end()) continue;
      erased.push_back(r);
      const auto e = extreme_singular_values(keep_rows(a, ErasureSet::from_erased(a.rows(), erased)));
      erased.pop_back();
      if (e.cond > best.cond) {
        best = e;
        best_row = r;
      }
    }
    erased.push_back(best_row);
    worst = best;
  }
  return worst;
}

inline SingularExtremes exhaustive_worst(const Matrix& a, std::size_t erase_count, std::uint64_t cap) {
  SingularExtremes worst{};
  worst.cond = -1.0;
  for (const auto& set : enumerate_erasures(a.rows(), erase_count, cap)) {
    const auto e = extreme_singular_values(keep_rows(a, set));
    if (e.cond > worst.cond) worst = e;
  }
  return worst;
}

inline SimSummary run_condition_sim(const SimConfig& config, std::size_t erase_count, std::string kind) {
  const auto start = std::chrono::steady_clock::now();
  if (config.trials == 0) throw PreconditionError("simulation: trials must be >= 1");
  if (config.rows == 0 || config.cols == 0) throw PreconditionError("simulation: rows and cols must be >= 1");
  if (config.cols > config.rows) throw PreconditionError("simulation: need rows >= cols");
  if (erase_count > config.rows - config.cols) {
    std::ostringstream msg;
    msg << "simulation: erasing " << erase_count << " of " << config.rows << " rows leaves fewer than "
        << config.cols << " rows";
    throw PreconditionError(msg.str());
  }
  const auto mode = erase_count == 0 ? ErasureMode::none : config.erasure_mode;
  if (mode == ErasureMode::exhaustive) {
    (void)enumerate_erasures(config.rows, erase_count, config.enumeration_cap);  // cap check up front
  }

  SimSummary out;
  out.kind = std::move(kind);
  out.config = config;
  out.erase_count = erase_count;
  out.reduced_rows = config.rows - erase_count;
  out.trials.resize(config.trials);

  parallel_for(config.trials, worker_count(config.workers), [&](std::size_t i) {
    const std::uint64_t seed = rng::stream_seed(config.master_seed, i);
    const auto sample = generate(config.distribution, config.rows, config.cols, seed);
    SingularExtremes e;
    switch (mode) {
      case ErasureMode::none:
        e = extreme_singular_values(sample.entries);
        break;
      case ErasureMode::random_subset: {
        rng::Xoshiro256 engine(erasure_stream_seed(seed));
        e = extreme_singular_values(keep_rows(sample.entries, random_erasure(config.rows, erase_count, engine)));
        break;
      }
      case ErasureMode::exhaustive:
        e = exhaustive_worst(sample.entries, erase_count, config.enumeration_cap);
        break;
      case ErasureMode::adversarial:
        e = greedy_worst(sample.entries, erase_count);
        break;
    }
    out.trials[i] = record(i, seed, e);
  });

  std::vector<double> conds(out.trials.size());
  std::transform(out.trials.begin(), out.trials.end(), conds.begin(), [](const auto& t) { return t.cond; });
  std::sort(conds.begin(), conds.end());
  for (const double level : config.quantiles) {
    const auto iv = stats::quantile_interval_sorted(conds, level);
    out.quantiles.push_back({level, stats::quantile_sorted(conds, level), iv.lo, iv.hi});
  }
  out.cond_max = conds.back();
  out.cond_median = stats::quantile_sorted(conds, 0.5);

  auto range = [&](auto field) {
    RangeStats r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0.0};
    double sum = 0.0;
    for (const auto& t : out.trials) {
      const double v = t.*field;
      r.min = std::min(r.min, v);
      r.max = std::max(r.max, v);
      sum += v;
    }
    r.mean = sum / static_cast<double>(out.trials.size());
    return r;
  };
  out.s_min = range(&TrialRecord::s_min);
  out.s_max = range(&TrialRecord::s_max);
  out.marchenko_pastur_cond = marchenko_pastur_cond(out.reduced_rows, config.cols);
  out.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace detail

/// Condition numbers of A_T over `trials` fresh matrices, erasing
/// round(beta * rows) rows per trial according to the erasure mode.
inline SimSummary run_nerf_sim(const SimConfig& config) {
  return detail::run_condition_sim(config, config.erase_count(), "nerf");
}

/// Square case: exactly rows - cols rows are erased. A nonzero beta must
/// round to that count.
inline SimSummary run_square_sim(const SimConfig& config) {
  if (config.cols > config.rows) throw PreconditionError("square simulation: need rows >= cols");
  const std::size_t k = config.rows - config.cols;
  if (config.beta != 0.0 && config.erasure_mode != ErasureMode::none && config.erase_count() != k) {
    std::ostringstream msg;
    msg << "square simulation: beta * rows rounds to " << config.erase_count() << " but rows - cols = " << k;
    throw PreconditionError(msg.str());
  }
  SimConfig c = config;
  if (c.erasure_mode == ErasureMode::none && k > 0) c.erasure_mode = ErasureMode::random_subset;
  if (c.rows > 0) c.beta = static_cast<double>(k) / static_cast<double>(c.rows);
  return detail::run_condition_sim(c, k, "square");
}

// ---------------------------------------------------------------------------
// Bound checks

enum class Verdict { holds, violated, inconclusive };

inline std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

/// Theoretical bound vs. empirical estimate with one-sided 99% confidence
/// limits. holds iff upper_confidence <= bound; violated iff
/// lower_confidence > bound.
struct BoundCheck {
  std::string name;
  double theoretical_bound = 0.0;
  double empirical_estimate = 0.0;
  double upper_confidence = 0.0;
  double lower_confidence = 0.0;
  std::uint64_t trials = 0;
  std::optional<std::uint64_t> events;  // set for frequency checks
  Verdict verdict = Verdict::inconclusive;
  std::string note;
};

inline Verdict decide(double bound, double lower, double upper) {
  if (upper <= bound) return Verdict::holds;
  if (lower > bound) return Verdict::violated;
  return Verdict::inconclusive;
}

/// Frequency check with exact Clopper-Pearson limits.
inline BoundCheck frequency_check(std::string name, double bound, std::uint64_t events, std::uint64_t trials,
                                  std::string note = {}) {
  BoundCheck c;
  c.name = std::move(name);
  c.theoretical_bound = bound;
  c.trials = trials;
  c.events = events;
  c.empirical_estimate = static_cast<double>(events) / static_cast<double>(trials);
  c.upper_confidence = stats::clopper_pearson_upper(events, trials);
  c.lower_confidence = stats::clopper_pearson_lower(events, trials);
  c.verdict = decide(bound, c.lower_confidence, c.upper_confidence);
  c.note = std::move(note);
  return c;
}

/// Mean check with mean +- 3 standard errors as the limits.
inline BoundCheck mean_check(std::string name, double bound, const stats::MeanEstimate& est, std::uint64_t trials,
                             std::string note = {}) {
  BoundCheck c;
  c.name = std::move(name);
  c.theoretical_bound = bound;
  c.trials = trials;
  c.empirical_estimate = est.mean;
  c.upper_confidence = est.mean + 3.0 * est.standard_error;
  c.lower_confidence = est.mean - 3.0 * est.standard_error;
  c.verdict = decide(bound, c.lower_confidence, c.upper_confidence);
  c.note = std::move(note);
  return c;
}

/// One Bernoulli outcome per seeded trial.
using EventSampler = std::function<bool(std::uint64_t seed)>;

/// Counts events over `trials` seeded trials and checks the frequency
/// against `bound`.
inline BoundCheck verify_tail(std::string name, const EventSampler& sampler, double bound, std::size_t trials,
                              std::uint64_t master_seed, std::optional<std::size_t> workers = {},
                              std::string note = {}) {
  if (trials == 0) throw PreconditionError("verify_tail: trials must be >= 1");
  std::vector<char> hit(trials, 0);
  parallel_for(trials, worker_count(workers),
               [&](std::size_t i) { hit[i] = sampler(rng::stream_seed(master_seed, i)) ? 1 : 0; });
  const auto events = static_cast<std::uint64_t>(std::count(hit.begin(), hit.end(), 1));
  return frequency_check(std::move(name), bound, events, trials, std::move(note));
}

/// sqrt((1/k) sum_{j<=k} y_(j)^2) over the k largest |y_j|.
inline double top_k_rms(std::vector<double> y, std::size_t k) {
  if (k == 0 || k > y.size()) throw DomainError("top_k_rms: requires 1 <= k <= n");
  for (auto& v : y) v = v * v;
  std::nth_element(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(k - 1), y.end(), std::greater<>());
  double sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) sum += y[j];
  return std::sqrt(sum / static_cast<double>(k));
}

/// Monte Carlo mean of the top-k RMS statistic vs sqrt(2 e b^2 ln(e n/k)), b = 1.
inline BoundCheck verify_order_stats(std::size_t n, std::size_t k, Distribution dist, std::size_t trials,
                                     std::uint64_t master_seed, std::optional<std::size_t> workers = {}) {
  if (trials == 0) throw PreconditionError("verify_order_stats: trials must be >= 1");
  const double bound = pm1::order_stat_expectation_bound(n, k, 1.0);
  std::vector<double> stat(trials);
  parallel_for(trials, worker_count(workers), [&](std::size_t i) {
    rng::Xoshiro256 engine(rng::stream_seed(master_seed, i));
    std::vector<double> y(n);
    for (auto& v : y) v = dist == Distribution::gaussian ? engine.normal() : engine.rademacher();
    stat[i] = top_k_rms(std::move(y), k);
  });
  std::ostringstream note;
  note << to_string(dist) << " n=" << n << " k=" << k;
  return mean_check("order_stats_" + std::string(to_string(dist)), bound, stats::mean_and_se(stat), trials,
                    note.str());
}

/// Deviation of (1/rows)|Ax|^2 from |x|^2 = 1 for a fixed unit x, both
/// tails, against the exp(-(eps^2/4 - eps^3/6) rows) and exp(-eps^2 rows/12)
/// bounds. Returns four checks: {pm1 upper, pm1 lower, kappa upper, kappa lower}.
inline std::vector<BoundCheck> verify_concentration(Distribution dist, std::size_t rows, std::size_t cols,
                                                    double epsilon, std::size_t trials, std::uint64_t master_seed,
                                                    std::optional<std::size_t> workers = {}) {
  if (trials == 0) throw PreconditionError("verify_concentration: trials must be >= 1");
  rng::Xoshiro256 x_engine(rng::stream_seed(master_seed, ~0ULL));
  const Vector x = sample_sparse_unit_vector(cols, cols, x_engine);
  std::vector<signed char> side(trials, 0);
  parallel_for(trials, worker_count(workers), [&](std::size_t i) {
    const auto a = generate(dist, rows, cols, rng::stream_seed(master_seed, i));
    const double dev = (a.entries * x).squaredNorm() / static_cast<double>(rows) - 1.0;
    side[i] = dev > epsilon ? 1 : (dev < -epsilon ? -1 : 0);
  });
  const auto up = static_cast<std::uint64_t>(std::count(side.begin(), side.end(), 1));
  const auto down = static_cast<std::uint64_t>(std::count(side.begin(), side.end(), -1));
  const double pm1_bound = pm1::concentration_bound_pm1(epsilon, rows);
  const double kappa_bound = pm1::concentration_bound_kappa(epsilon, rows);
  std::ostringstream note;
  note << to_string(dist) << " " << rows << "x" << cols << " eps=" << epsilon;
  return {frequency_check("concentration_pm1_upper", pm1_bound, up, trials, note.str()),
          frequency_check("concentration_pm1_lower", pm1_bound, down, trials, note.str()),
          frequency_check("concentration_kappa_upper", kappa_bound, up, trials, note.str()),
          frequency_check("concentration_kappa_lower", kappa_bound, down, trials, note.str())};
}

// ---------------------------------------------------------------------------
// SRIP / JL verification

/// |y_T|^2 for the rows kept by T.
inline double kept_norm2(const Vector& y, const ErasureSet& set) {
  double s = 0.0;
  for (const auto i : set.kept()) s += y(static_cast<Eigen::Index>(i)) * y(static_cast<Eigen::Index>(i));
  return s;
}

/// min over |T^c| = k of |y_T|^2: drop the k largest squared entries.
inline double worst_kept_norm2(const Vector& y, std::size_t k) {
  std::vector<double> sq(static_cast<std::size_t>(y.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i) sq[static_cast<std::size_t>(i)] = y(i) * y(i);
  const double total = std::accumulate(sq.begin(), sq.end(), 0.0);
  if (k == 0) return total;
  if (k >= sq.size()) return 0.0;
  std::nth_element(sq.begin(), sq.begin() + static_cast<std::ptrdiff_t>(k - 1), sq.end(), std::greater<>());
  double dropped = 0.0;
  for (std::size_t j = 0; j < k; ++j) dropped += sq[j];
  // Sum the kept part directly; total - dropped loses precision.
  double kept = 0.0;
  for (std::size_t j = k; j < sq.size(); ++j) kept += sq[j];
  return kept;
}

/// Extremes of |A_T u|^2 (unnormalized).
struct NormExtremes {
  double min_sq = std::numeric_limits<double>::infinity();
  double max_sq = 0.0;

  void merge(const NormExtremes& o) {
    min_sq = std::min(min_sq, o.min_sq);
    max_sq = std::max(max_sq, o.max_sq);
  }
};

/// Extremes of |A_T u|^2 over the given erasure sets for each u (the
/// maximum always includes T = all rows).
inline NormExtremes norm_extremes_over_sets(const Matrix& a, std::span<const Vector> us,
                                            std::span<const ErasureSet> sets) {
  NormExtremes out;
  for (const auto& u : us) {
    const Vector y = a * u;
    out.max_sq = std::max(out.max_sq, y.squaredNorm());
    for (const auto& t : sets) out.min_sq = std::min(out.min_sq, kept_norm2(y, t));
  }
  return out;
}

/// Exact extremes of |A_T u|^2 over all unit u with |supp(u)| <= s and all T
/// with |T^c| <= k, by enumerating supports and erasures (tiny sizes only).
inline NormExtremes srip_exact_extremes(const Matrix& a, std::size_t s, std::size_t k,
                                        std::uint64_t cap = kDefaultEnumerationCap) {
  const auto m = static_cast<std::size_t>(a.cols());
  const auto n = static_cast<std::size_t>(a.rows());
  if (s == 0 || s > m) throw DomainError("srip_exact_extremes: need 1 <= s <= cols");
  if (n - k < s) throw DomainError("srip_exact_extremes: too few kept rows for the support size");
  const double log_work = specfun::log_binomial(m, s) + specfun::log_binomial(n, k);
  if (log_work > std::log(static_cast<double>(cap)) + 1e-9)
    throw CapExceededError("srip_exact_extremes: C(m,s) C(n,k) exceeds the cap");

  NormExtremes out;
  // Supports are enumerated as "erasures" of columns: keep exactly s of m.
  for (const auto& drop_cols : ErasureEnumeration(m, m - s)) {
    Matrix sub(a.rows(), static_cast<Eigen::Index>(s));
    for (std::size_t j = 0; j < s; ++j)
      sub.col(static_cast<Eigen::Index>(j)) = a.col(static_cast<Eigen::Index>(drop_cols.kept()[j]));
    out.max_sq = std::max(out.max_sq, std::pow(extreme_singular_values(sub).s_max, 2));
    for (const auto& t : ErasureEnumeration(n, k)) {
      out.min_sq = std::min(out.min_sq, std::pow(extreme_singular_values(keep_rows(sub, t)).s_min, 2));
    }
  }
  return out;
}

struct CertificateVerification {
  BoundCheck check;
  double min_normalized = std::numeric_limits<double>::infinity();  // min (1/n)|A_T u|^2 seen
  double max_normalized = 0.0;                                       // max (1/n)|A_T u|^2 seen
  double lower_constant = 0.0;
  double upper_constant = 0.0;
  std::uint64_t violations = 0;
  std::string mode;
};

namespace detail {

inline NormExtremes vector_extremes(const Matrix& a, const Vector& u, std::size_t k, ErasureMode mode,
                                    std::size_t t_samples, rng::Xoshiro256& engine, std::uint64_t cap) {
  const Vector y = a * u;
  NormExtremes e;
  e.max_sq = y.squaredNorm();
  switch (mode) {
    case ErasureMode::none:
      e.min_sq = e.max_sq;
      break;
    case ErasureMode::adversarial:
      e.min_sq = worst_kept_norm2(y, k);
      break;
    case ErasureMode::random_subset:
      for (std::size_t t = 0; t < t_samples; ++t)
        e.min_sq = std::min(e.min_sq, kept_norm2(y, random_erasure(a.rows(), k, engine)));
      break;
    case ErasureMode::exhaustive:
      for (const auto& t : enumerate_erasures(a.rows(), k, cap)) e.min_sq = std::min(e.min_sq, kept_norm2(y, t));
      break;
  }
  return e;
}

}  // namespace detail

/// Fresh n x m matrices (rows = n, cols = m from the config); estimates how
/// often the SRIP event
///   theta_eps |u|^2 <= (1/n)|A_T u|^2 <= omega~(1+2eps) |u|^2
/// fails. Exhaustive mode checks every support and every T exactly;
/// adversarial mode takes the exact worst T for each of x_samples random
/// s-sparse u; random_subset samples t_samples T per u.
inline CertificateVerification verify_srip(const SimConfig& config, const pm1::SripCertificate& cert,
                                           std::size_t x_samples, std::size_t t_samples = 64) {
  if (config.trials == 0) throw PreconditionError("verify_srip: trials must be >= 1");
  if (config.rows != cert.n || config.cols != cert.m)
    throw PreconditionError("verify_srip: config shape must match the certificate's n x m");
  const std::size_t k = config.erase_count();
  if (k + cert.s > config.rows) throw PreconditionError("verify_srip: erasure leaves fewer rows than s");
  if (config.erasure_mode == ErasureMode::exhaustive) {
    const double log_work = specfun::log_binomial(cert.m, cert.s) + specfun::log_binomial(config.rows, k);
    if (log_work > std::log(static_cast<double>(config.enumeration_cap)) + 1e-9)
      throw CapExceededError("verify_srip: exhaustive enumeration exceeds the cap");
  } else if (x_samples == 0) {
    throw PreconditionError("verify_srip: x_samples must be >= 1");
  }

  const double n = static_cast<double>(config.rows);
  std::vector<NormExtremes> per_trial(config.trials);
  parallel_for(config.trials, worker_count(config.workers), [&](std::size_t i) {
    const std::uint64_t seed = rng::stream_seed(config.master_seed, i);
    const auto sample = generate(config.distribution, config.rows, config.cols, seed);
    if (config.erasure_mode == ErasureMode::exhaustive) {
      per_trial[i] = srip_exact_extremes(sample.entries, cert.s, k, config.enumeration_cap);
      return;
    }
    rng::Xoshiro256 engine(erasure_stream_seed(seed));
    NormExtremes e;
    for (std::size_t j = 0; j < x_samples; ++j) {
      const Vector u = sample_sparse_unit_vector(config.cols, cert.s, engine);
      e.merge(detail::vector_extremes(sample.entries, u, k, config.erasure_mode, t_samples, engine,
                                      config.enumeration_cap));
    }
    per_trial[i] = e;
  });

  CertificateVerification out;
  out.mode = std::string(to_string(config.erasure_mode));
  out.lower_constant = cert.theta_eps;
  out.upper_constant = cert.omega_tilde_scaled;
  for (const auto& e : per_trial) {
    const double lo = e.min_sq / n;
    const double hi = e.max_sq / n;
    out.min_normalized = std::min(out.min_normalized, lo);
    out.max_normalized = std::max(out.max_normalized, hi);
    if (lo < cert.theta_eps || hi > cert.omega_tilde_scaled) ++out.violations;
  }
  std::ostringstream note;
  note << "n=" << cert.n << " m=" << cert.m << " s=" << cert.s << " erase=" << k << " mode=" << out.mode;
  out.check = frequency_check("srip_pm1", cert.failure_prob_bound, out.violations, config.trials, note.str());
  return out;
}

/// Robust JL check: fresh matrices with rows = n and cols = point dimension;
/// a trial fails if any pair difference d violates
///   theta~ |d|^2 <= (1/n)|A_T d|^2 <= omega~ |d|^2 for some admissible T.
inline CertificateVerification verify_jl(std::span<const Vector> points, const SimConfig& config,
                                         const pm1::JlCertificate& cert, std::size_t t_samples = 64) {
  if (points.size() < 2) throw PreconditionError("verify_jl: needs at least two points");
  if (config.trials == 0) throw PreconditionError("verify_jl: trials must be >= 1");
  const auto dim = points.front().size();
  for (const auto& p : points)
    if (p.size() != dim) throw PreconditionError("verify_jl: points must share one dimension");
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (points[i] == points[j]) throw PreconditionError("verify_jl: duplicate points");
  if (config.rows != cert.n) throw PreconditionError("verify_jl: config rows must equal the certificate's n");
  if (static_cast<Eigen::Index>(config.cols) != dim)
    throw PreconditionError("verify_jl: config cols must equal the point dimension");

  std::vector<Vector> diffs;
  std::vector<double> diff_norm2;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      diffs.push_back(points[i] - points[j]);
      diff_norm2.push_back(diffs.back().squaredNorm());
    }

  const std::size_t k = config.erase_count();
  const double n = static_cast<double>(config.rows);
  struct Outcome {
    bool violated = false;
    double min_ratio = std::numeric_limits<double>::infinity();
    double max_ratio = 0.0;
  };
  std::vector<Outcome> per_trial(config.trials);
  parallel_for(config.trials, worker_count(config.workers), [&](std::size_t i) {
    const std::uint64_t seed = rng::stream_seed(config.master_seed, i);
    const auto sample = generate(config.distribution, config.rows, config.cols, seed);
    rng::Xoshiro256 engine(erasure_stream_seed(seed));
    Outcome o;
    for (std::size_t d = 0; d < diffs.size(); ++d) {
      const auto e = detail::vector_extremes(sample.entries, diffs[d], k, config.erasure_mode, t_samples, engine,
                                             config.enumeration_cap);
      const double lo = e.min_sq / n / diff_norm2[d];
      const double hi = e.max_sq / n / diff_norm2[d];
      o.min_ratio = std::min(o.min_ratio, lo);
      o.max_ratio = std::max(o.max_ratio, hi);
      if (lo < cert.theta_tilde || hi > cert.omega_tilde) o.violated = true;
    }
    per_trial[i] = o;
  });

  CertificateVerification out;
  out.mode = std::string(to_string(config.erasure_mode));
  out.lower_constant = cert.theta_tilde;
  out.upper_constant = cert.omega_tilde;
  for (const auto& o : per_trial) {
    out.min_normalized = std::min(out.min_normalized, o.min_ratio);
    out.max_normalized = std::max(out.max_normalized, o.max_ratio);
    if (o.violated) ++out.violations;
  }
  std::ostringstream note;
  note << "N=" << points.size() << " n=" << cert.n << " erase=" << k << " mode=" << out.mode;
  out.check = frequency_check("jl_pm1", cert.failure_prob_bound, out.violations, config.trials, note.str());
  return out;
}

}  // namespace erasurelab::mc
