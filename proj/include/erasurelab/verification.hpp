#pragma once

// Default bound-validity suite. Each group names one inequality; every check
// draws from its own seed stream so groups can be run alone with identical
// results.

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "erasurelab/gauss_frame_bounds.hpp"
#include "erasurelab/matrix_lab.hpp"
#include "erasurelab/monte_carlo.hpp"
#include "erasurelab/pm1_bounds.hpp"
#include "erasurelab/rng.hpp"
#include "erasurelab/specfun.hpp"

namespace erasurelab::mc {

inline const std::vector<std::string>& suite_groups() {
  static const std::vector<std::string> groups{"khb",        "concentration", "smax", "chi2", "square_smin",
                                               "order_stats", "khinchine",     "srip", "jl"};
  return groups;
}

struct SuiteOptions {
  std::size_t trials = 10000;
  std::size_t certificate_trials = 200;  // fresh matrices for the srip / jl groups
  std::uint64_t seed = 0;
  std::optional<std::size_t> workers;
  std::set<std::string> only;             // empty: every group
  std::optional<double> forced_bound;     // test hook: replaces every theoretical bound
};

/// Two-sided Khinchine moment check: the p-th moment root of sum c_j eps_j
/// for a random unit c lies in [a(p)(1 - delta), b(p)(1 + delta)], delta = 3
/// relative standard errors of the root.
struct KhinchineCheck {
  double p = 0.0;
  std::size_t m = 0;
  std::size_t samples = 0;
  double a = 0.0;
  double b = 0.0;
  double moment_root = 0.0;
  double delta = 0.0;
  bool within = false;
};

inline KhinchineCheck verify_khinchine(double p, std::size_t m, std::size_t samples, std::uint64_t seed,
                                       std::optional<std::size_t> workers = {}) {
  if (m == 0 || samples < 2) throw PreconditionError("verify_khinchine: need m >= 1 and samples >= 2");
  const Vector c = sample_sparse_unit_vector(m, m, rng::stream_seed(seed, ~0ULL));
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<double> sum(chunks), sum2(chunks);
  parallel_for(chunks, worker_count(workers), [&](std::size_t ci) {
    rng::Xoshiro256 engine(rng::stream_seed(seed, ci));
    const std::size_t end = std::min(samples, (ci + 1) * kChunk);
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = ci * kChunk; i < end; ++i) {
      double x = 0.0;
      for (Eigen::Index j = 0; j < c.size(); ++j) x += c(j) * engine.rademacher();
      const double v = std::pow(std::abs(x), p);
      s1 += v;
      s2 += v * v;
    }
    sum[ci] = s1;
    sum2[ci] = s2;
  });
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < chunks; ++i) {
    s1 += sum[i];
    s2 += sum2[i];
  }
  const double n = static_cast<double>(samples);
  const double mean = s1 / n;
  const double var = std::max(0.0, (s2 - n * mean * mean) / (n - 1.0));
  const double se = std::sqrt(var / n);

  const auto k = pm1::khinchine_constants(p);
  KhinchineCheck out;
  out.p = p;
  out.m = m;
  out.samples = samples;
  out.a = k.a;
  out.b = k.b;
  out.moment_root = std::pow(mean, 1.0 / p);
  out.delta = 3.0 * se / (p * mean);  // delta-method relative SE of mean^(1/p)
  out.within = out.moment_root >= k.a * (1.0 - out.delta) && out.moment_root <= k.b * (1.0 + out.delta);
  return out;
}

/// The two Khinchine inequalities as ratio checks against 1:
/// a(p) / root <= 1 and root / b(p) <= 1, limits from root (1 -+ delta).
inline std::vector<BoundCheck> khinchine_bound_checks(const KhinchineCheck& k) {
  std::ostringstream tag, note;
  tag << "_p" << k.p;
  note << "m=" << k.m << " a=" << k.a << " b=" << k.b << " root=" << k.moment_root << " delta=" << k.delta;
  const double lo_root = k.moment_root * (1.0 - k.delta);
  const double hi_root = k.moment_root * (1.0 + k.delta);
  BoundCheck lower;
  lower.name = "khinchine_lower" + tag.str();
  lower.theoretical_bound = 1.0;
  lower.empirical_estimate = k.a / k.moment_root;
  lower.upper_confidence = k.a / lo_root;
  lower.lower_confidence = k.a / hi_root;
  lower.trials = k.samples;
  lower.verdict = decide(1.0, lower.lower_confidence, lower.upper_confidence);
  lower.note = note.str();
  BoundCheck upper = lower;
  upper.name = "khinchine_upper" + tag.str();
  upper.empirical_estimate = k.moment_root / k.b;
  upper.upper_confidence = hi_root / k.b;
  upper.lower_confidence = lo_root / k.b;
  upper.verdict = decide(1.0, upper.lower_confidence, upper.upper_confidence);
  return {lower, upper};
}

namespace detail {

inline BoundCheck force(BoundCheck c, std::optional<double> bound) {
  if (!bound) return c;
  c.theoretical_bound = *bound;
  c.verdict = decide(*bound, c.lower_confidence, c.upper_confidence);
  c.note += " (forced bound)";
  return c;
}

}  // namespace detail

/// Runs the selected groups. Seeds: group g uses stream_seed(seed, g + 1).
inline std::vector<BoundCheck> run_verification_suite(const SuiteOptions& opt) {
  for (const auto& g : opt.only) {
    bool known = false;
    for (const auto& s : suite_groups()) known = known || s == g;
    if (!known) throw PreconditionError("verify: unknown check group '" + g + "'");
  }
  auto selected = [&](std::string_view g) { return opt.only.empty() || opt.only.contains(std::string(g)); };
  auto group_seed = [&](std::string_view g) {
    std::uint64_t i = 0;
    for (; i < suite_groups().size(); ++i)
      if (suite_groups()[i] == g) break;
    return rng::stream_seed(opt.seed, i + 1);
  };
  const std::size_t trials = opt.trials;
  std::vector<BoundCheck> out;

  if (selected("khb")) {
    // P(|Ax|^2 <= (1/2 - q) n) < exp(-q n / 3), +-1 entries, unit x.
    constexpr std::size_t n = 12, m = 4;
    constexpr double q = 0.3;
    const std::uint64_t s = group_seed("khb");
    const Vector x = sample_sparse_unit_vector(m, m, rng::stream_seed(s, ~0ULL));
    out.push_back(verify_tail(
        "khb_tail",
        [&](std::uint64_t seed) {
          const auto a = generate(Distribution::rademacher, n, m, seed);
          return (a.entries * x).squaredNorm() <= (0.5 - q) * static_cast<double>(n);
        },
        pm1::khb_tail_bound(q, n), trials, s, opt.workers, "rademacher n=12 m=4 q=0.3"));
  }

  if (selected("concentration")) {
    const std::uint64_t s = group_seed("concentration");
    for (const auto& c : verify_concentration(Distribution::rademacher, 300, 16, 0.3, trials, s, opt.workers))
      out.push_back(c);
    for (auto c : verify_concentration(Distribution::gaussian, 300, 16, 0.3, trials, rng::stream_seed(s, 1),
                                       opt.workers)) {
      c.name += "_gaussian";
      out.push_back(c);
    }
  }

  if (selected("smax")) {
    // P(s_max(A) >= sqrt(n) + sqrt(m) + t) <= exp(-t^2/2), Gaussian 100 x 50.
    constexpr std::size_t n = 100, m = 50;
    constexpr double t = 2.0;
    const double level = std::sqrt(double(n)) + std::sqrt(double(m)) + t;
    out.push_back(verify_tail(
        "smax_tail",
        [&](std::uint64_t seed) {
          return extreme_singular_values(generate(Distribution::gaussian, n, m, seed)).s_max >= level;
        },
        gauss::smax_tail_bound(t), trials, group_seed("smax"), opt.workers, "gaussian 100x50 t=2"));
  }

  if (selected("chi2")) {
    // P(|Ax|^2 <= q(alpha, lambda) m) <= exp(-alpha m) with |Ax|^2 ~ chi^2_n.
    constexpr std::size_t n = 20, m = 10;
    constexpr double alpha = 0.05;
    const double lam = 1.0 - double(m) / double(n);
    const double q = gauss::q_small(alpha, lam);
    const double threshold = q * double(m);
    const std::uint64_t s = group_seed("chi2");
    const Vector x = sample_sparse_unit_vector(m, m, rng::stream_seed(s, ~0ULL));
    std::ostringstream note;
    note << "gaussian 20x10 alpha=0.05 q=" << q << " exact_cdf=" << specfun::chi2_lower_cdf(n, threshold);
    out.push_back(verify_tail(
        "chi2_lower_tail",
        [&](std::uint64_t seed) {
          const auto a = generate(Distribution::gaussian, n, m, seed);
          return (a.entries * x).squaredNorm() <= threshold;
        },
        std::exp(-alpha * double(m)), trials, s, opt.workers, note.str()));
  }

  if (selected("square_smin")) {
    // P(s_min(A) <= c / sqrt(m)) <= c, square Gaussian m x m.
    constexpr std::size_t m = 30;
    constexpr double c = 0.5;
    const double level = c / std::sqrt(double(m));
    out.push_back(verify_tail(
        "square_smin_tail",
        [&](std::uint64_t seed) {
          return extreme_singular_values(generate(Distribution::gaussian, m, m, seed)).s_min <= level;
        },
        gauss::square_smin_tail_bound(c), trials, group_seed("square_smin"), opt.workers, "gaussian 30x30 c=0.5"));
  }

  if (selected("order_stats")) {
    const std::uint64_t s = group_seed("order_stats");
    out.push_back(verify_order_stats(1000, 10, Distribution::gaussian, trials, s, opt.workers));
    out.push_back(verify_order_stats(100, 10, Distribution::rademacher, trials, rng::stream_seed(s, 1), opt.workers));
  }

  if (selected("khinchine")) {
    const std::uint64_t s = group_seed("khinchine");
    std::uint64_t i = 0;
    for (const double p : {1.0, 3.0, 4.0})
      for (auto& c : khinchine_bound_checks(verify_khinchine(p, 8, 100 * trials, rng::stream_seed(s, i++), opt.workers)))
        out.push_back(std::move(c));
  }

  if (selected("srip")) {
    const std::uint64_t s = group_seed("srip");
    {
      // Tiny instance, every support and every single-row erasure enumerated.
      const pm1::ErasureLevel level(0.03, 0.02);
      const auto cert = pm1::srip_constants(level, 2, 8, 12, 0.5);
      SimConfig cfg;
      cfg.distribution = Distribution::rademacher;
      cfg.rows = 12;
      cfg.cols = 8;
      cfg.beta = 1.0 / 12.0;
      cfg.erasure_mode = ErasureMode::exhaustive;
      cfg.trials = opt.certificate_trials;
      cfg.master_seed = s;
      cfg.workers = opt.workers;
      auto v = verify_srip(cfg, cert, 0);
      v.check.name = "srip_exhaustive_n12";
      out.push_back(v.check);
    }
    {
      const pm1::ErasureLevel level(0.01, 0.02);
      const auto cert = pm1::srip_certificate(level, 2, 64, 4096, 0.25);
      SimConfig cfg;
      cfg.distribution = Distribution::rademacher;
      cfg.rows = 4096;
      cfg.cols = 64;
      cfg.beta = 0.01;
      cfg.erasure_mode = ErasureMode::adversarial;
      cfg.trials = opt.certificate_trials;
      cfg.master_seed = rng::stream_seed(s, 1);
      cfg.workers = opt.workers;
      auto v = verify_srip(cfg, cert, 64);
      v.check.name = "srip_adversarial_n4096";
      out.push_back(v.check);
    }
  }

  if (selected("jl")) {
    const std::uint64_t s = group_seed("jl");
    constexpr std::size_t dim = 32, N = 5, n = 2000;
    std::vector<Vector> points;
    rng::Xoshiro256 engine(rng::stream_seed(s, ~0ULL));
    for (std::size_t i = 0; i < N; ++i) {
      Vector p(dim);
      for (Eigen::Index j = 0; j < p.size(); ++j) p(j) = engine.normal();
      points.push_back(p);
    }
    const pm1::ErasureLevel level(0.01, 0.02);
    const auto cert = pm1::jl_certificate(level, N, n);
    SimConfig cfg;
    cfg.distribution = Distribution::rademacher;
    cfg.rows = n;
    cfg.cols = dim;
    cfg.beta = 0.01;
    cfg.erasure_mode = ErasureMode::adversarial;
    cfg.trials = opt.certificate_trials;
    cfg.master_seed = s;
    cfg.workers = opt.workers;
    out.push_back(verify_jl(points, cfg, cert).check);
  }

  for (auto& c : out) c = detail::force(std::move(c), opt.forced_bound);
  return out;
}

}  // namespace erasurelab::mc
