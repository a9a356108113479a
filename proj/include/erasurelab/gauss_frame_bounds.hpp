#pragma once

// Certificates for Gaussian frames: an n x m (n > m) matrix with i.i.d.
// standard normal entries, redundancy rate lambda = 1 - m/n.
//
// Extreme singular value tails, the Lambert-W lower level q(alpha, lambda),
// the supremum p(alpha, lambda), and the erasure condition-number
// certificate C = R/P for tall and square reduced matrices. Quantities that
// multiply exponentials are carried in log space.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>

#include "erasurelab/error.hpp"
#include "erasurelab/specfun.hpp"

namespace erasurelab::gauss {

using specfun::detail::xlogx;

/// Row/column shape of a tall frame.
struct FrameShape {
  std::uint64_t n = 0;  // rows
  std::uint64_t m = 0;  // columns

  [[nodiscard]] double lambda() const noexcept {
    return 1.0 - static_cast<double>(m) / static_cast<double>(n);
  }

  static FrameShape make(std::uint64_t n, std::uint64_t m) {
    if (m == 0 || n <= m) throw PreconditionError("frame shape requires n > m >= 1");
    return {n, m};
  }
};

namespace detail {

inline void check_lambda(double lam, const char* what) {
  if (!(lam > 0.0 && lam < 1.0)) {
    std::ostringstream msg;
    msg << what << ": lambda = " << lam << " must lie in (0, 1)";
    throw DomainError(msg.str());
  }
}

}  // namespace detail

/// ln q(alpha, lambda). Uses -W0(z) = -z e^{-W0(z)}, which stays exact when
/// the Lambert argument underflows.
inline double log_q_small(double alpha, double lam) {
  detail::check_lambda(lam, "q_small");
  if (!(alpha > 0.0)) throw DomainError("q_small: alpha must be positive");
  const double exponent = -2.0 * alpha * (1.0 - lam) - 1.2;
  const double w = specfun::lambert_w0(-std::exp(exponent));
  return -std::log1p(-lam) + exponent - w;
}

/// q(alpha, lambda) = -(1-lambda)^-1 W0(-e^{-2 alpha (1-lambda) - 6/5}).
/// P(|Ax|^2 <= q m) <= e^{-alpha m} for unit x.
inline double q_small(double alpha, double lam) { return std::exp(log_q_small(alpha, lam)); }

/// r(alpha, lambda) = (1-lambda)^{-1/2} + 1 + sqrt(2 alpha).
/// P(s_max(A) >= r sqrt(m)) <= e^{-alpha m}.
inline double r_large(double alpha, double lam) {
  detail::check_lambda(lam, "r_large");
  if (!(alpha >= 0.0)) throw DomainError("r_large: alpha must be nonnegative");
  return 1.0 / std::sqrt(1.0 - lam) + 1.0 + std::sqrt(2.0 * alpha);
}

/// mu_alpha(eps) = alpha + ln(1 + 2/eps).
inline double mu_eps(double alpha, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("mu_eps: eps must be positive");
  return alpha + (std::log(epsilon + 2.0) - std::log(epsilon));
}

/// p_eps(alpha, lambda) = sqrt(q(mu, lambda)) - eps r(mu, lambda), mu = mu_alpha(eps).
inline double p_eps(double alpha, double lam, double epsilon) {
  const double mu = mu_eps(alpha, epsilon);
  return std::exp(0.5 * log_q_small(mu, lam)) - epsilon * r_large(mu, lam);
}

// The maximizing eps can sit near 1e-90 for small lambda, so the scan spans
// almost the whole positive double range.
inline constexpr specfun::Interval kEpsilonDomain{1e-300, 1.0 - 1e-6};
inline constexpr std::size_t kEpsilonGridPoints = 1024;

struct PSupremum {
  double value = 0.0;
  double argmax_eps = 0.0;
};

/// p(alpha, lambda) = sup_{eps in (0,1)} p_eps(alpha, lambda).
/// P(s_min(A) <= p sqrt(m)) <= 2 e^{-alpha m}.
inline PSupremum p_small(double alpha, double lam) {
  detail::check_lambda(lam, "p_small");
  if (!(alpha > 0.0)) throw DomainError("p_small: alpha must be positive");
  const auto best = specfun::maximize_1d([&](double eps) { return p_eps(alpha, lam, eps); }, kEpsilonDomain,
                                         1e-9, specfun::Spacing::logarithmic, kEpsilonGridPoints);
  if (!(best.max > 0.0)) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "p_small: nonpositive supremum " << best.max << " at eps = " << best.argmax << " for alpha = " << alpha
        << ", lambda = " << lam;
    throw ConvergenceError(msg.str());
  }
  return {best.max, best.argmax};
}

/// Redundancy rate of the reduced matrix after erasing a fraction beta of
/// the rows: (lambda - beta) / (1 - beta).
inline double lambda_after_erasure(double lam, double beta) { return (lam - beta) / (1.0 - beta); }

/// alpha(nu, lambda, beta) = nu + (1-lambda)^-1 ln[beta^-beta (1-beta)^-(1-beta)].
inline double alpha_for_erasure(double nu, double lam, double beta) {
  return nu - (xlogx(beta) + xlogx(1.0 - beta)) / (1.0 - lam);
}

struct NerfCertificate {
  double nu = 0.0;
  double lambda = 0.0;
  double beta = 0.0;
  double lambda_beta = 0.0;
  double alpha = 0.0;
  double P = 0.0;
  double R = 0.0;
  double C = 0.0;
  double argmax_eps = 0.0;
  std::optional<std::uint64_t> m;
  std::optional<double> success_prob_bound;  // max(0, 1 - 3e^{-nu m}), when m is known
};

/// Condition-number certificate for erasing beta n rows of an n x m Gaussian
/// frame: every such reduced matrix has Cond <= C = R/P with probability at
/// least 1 - 3e^{-nu m}.
inline NerfCertificate nerf_certificate(double nu, double lam, double beta, std::optional<std::uint64_t> m = {}) {
  if (!(nu > 0.0)) throw PreconditionError("nerf: nu must be positive");
  if (!(lam > 0.0 && lam < 1.0)) throw PreconditionError("nerf: lambda must lie in (0, 1)");
  if (!(beta > 0.0)) throw PreconditionError("nerf: beta must be positive");
  if (!(beta < lam)) {
    std::ostringstream msg;
    msg << "nerf: beta = " << beta << " >= lambda = " << lam
        << " leaves a square or wide matrix; use the square certificate for beta = lambda";
    throw PreconditionError(msg.str());
  }
  NerfCertificate c;
  c.nu = nu;
  c.lambda = lam;
  c.beta = beta;
  c.lambda_beta = lambda_after_erasure(lam, beta);
  c.alpha = alpha_for_erasure(nu, lam, beta);
  const auto p = p_small(c.alpha, c.lambda_beta);
  c.P = p.value;
  c.argmax_eps = p.argmax_eps;
  c.R = r_large(c.alpha, c.lambda_beta);
  c.C = c.R / c.P;
  c.m = m;
  if (m) c.success_prob_bound = std::max(0.0, 1.0 - 3.0 * std::exp(-nu * static_cast<double>(*m)));
  return c;
}

struct SquareNerfCertificate {
  double alpha = 0.0;
  double c = 0.0;
  double lambda = 0.0;
  std::uint64_t m = 0;
  double level = 0.0;                 // (2 + sqrt(2 alpha)) m / c
  double log_smin_term = 0.0;         // ln((e/lambda)^{lambda m/(1-lambda)} c)
  double log_smax_term = 0.0;         // m (lambda/(1-lambda)(1 - ln lambda) - alpha)
  double success_prob_bound = 0.0;    // clamped to [0, 1]
  bool c_within_stated_limit = false; // c <= 2 (e/lambda)^{lambda m/(1-lambda)}
};

/// alpha threshold lambda/(1-lambda) (1 - ln lambda) + 1 of the square case.
inline double square_alpha_threshold(double lam) {
  return lam / (1.0 - lam) * (1.0 - std::log(lam)) + 1.0;
}

/// Certificate for erasing exactly lambda n rows (the reduced matrix is
/// m x m): Cond <= (2 + sqrt(2 alpha)) m / c with probability at least
/// 1 - (e/lambda)^{lambda m/(1-lambda)} c - exp(m(lambda/(1-lambda)(1 - ln lambda) - alpha)).
inline SquareNerfCertificate square_nerf_certificate(double alpha, double c, double lam, std::uint64_t m) {
  if (!(lam > 0.0 && lam < 1.0)) throw PreconditionError("square nerf: lambda must lie in (0, 1)");
  if (!(c > 0.0)) throw PreconditionError("square nerf: c must be positive");
  if (m == 0) throw PreconditionError("square nerf: m must be >= 1");
  const double threshold = square_alpha_threshold(lam);
  if (!(alpha > threshold)) {
    std::ostringstream msg;
    msg.precision(8);
    msg << "square nerf: alpha = " << alpha << " must exceed lambda/(1-lambda)(1 - ln lambda) + 1 = " << threshold;
    throw PreconditionError(msg.str());
  }
  const double md = static_cast<double>(m);
  const double ratio = lam / (1.0 - lam);
  SquareNerfCertificate s;
  s.alpha = alpha;
  s.c = c;
  s.lambda = lam;
  s.m = m;
  s.level = (2.0 + std::sqrt(2.0 * alpha)) * md / c;
  const double log_count = ratio * md * (1.0 - std::log(lam));
  s.log_smin_term = log_count + std::log(c);
  s.log_smax_term = md * (ratio * (1.0 - std::log(lam)) - alpha);
  s.c_within_stated_limit = std::log(c) <= std::log(2.0) + log_count;
  s.success_prob_bound = std::clamp(1.0 - std::exp(s.log_smin_term) - std::exp(s.log_smax_term), 0.0, 1.0);
  return s;
}

/// exp((m/2)(1-lambda)^-1 (ln(q(1-lambda)) - q(1-lambda) + 6/5)): the bound on
/// P(|Ax|^2 <= q m) before it is solved for q. Not clamped; it exceeds 1 for
/// q near (1-lambda)^-1.
inline double chi2_tail_bound(double q, double lam, std::uint64_t m) {
  detail::check_lambda(lam, "chi2_tail_bound");
  const double u = q * (1.0 - lam);
  if (!(u > 0.0 && u <= 1.0 + 1e-15)) throw DomainError("chi2_tail_bound: q must lie in (0, (1-lambda)^-1]");
  return std::exp(0.5 * static_cast<double>(m) / (1.0 - lam) * (std::log(u) - u + 1.2));
}

/// e^{-t^2/2}: P(s_max(A) >= sqrt(n) + sqrt(m) + t) for Gaussian A, t >= 0.
inline double smax_tail_bound(double t) {
  if (!(t >= 0.0)) throw DomainError("smax_tail_bound: t must be nonnegative");
  return std::exp(-0.5 * t * t);
}

/// P(s_min(A) <= c / sqrt(m)) <= c for a square m x m Gaussian A.
inline double square_smin_tail_bound(double c) {
  if (!(c > 0.0)) throw DomainError("square_smin_tail_bound: c must be positive");
  return std::min(c, 1.0);
}

}  // namespace erasurelab::gauss
