#pragma once

// Theoretical constants and probability certificates for random +-1
// (Rademacher) matrices under erasure of a fraction beta of their rows:
// the theta/omega level estimates, the strong restricted isometry (SRIP)
// certificate, the robust Johnson-Lindenstrauss certificate, and the
// auxiliary inequalities (Khinchine, concentration, order statistics).
//
// Shape convention: Phi is n x m (n rows carry the erasures, m columns).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "erasurelab/error.hpp"
#include "erasurelab/specfun.hpp"

namespace erasurelab::pm1 {

using specfun::detail::xlogx;

/// ln((1-t)^(1-t) t^t) + (q/3)(1-t). Defined on t in [0, 1] by continuous
/// extension; q in (0, 1/2].
inline double f_q(double q, double t) {
  if (!(q > 0.0 && q <= 0.5)) throw DomainError("f_q: q must lie in (0, 1/2]");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("f_q: t must lie in [0, 1]");
  return xlogx(1.0 - t) + xlogx(t) + (q / 3.0) * (1.0 - t);
}

/// The unique root t_q of f_q on (0, 1/2).
inline double t_threshold(double q) {
  if (!(q > 0.0 && q <= 0.5)) throw DomainError("t_threshold: q must lie in (0, 1/2]");
  return specfun::find_root([q](double t) { return f_q(q, t); }, {0.0, 0.5}, 1e-15).root;
}

/// t_{+-1} = t_{1/2}, the largest erasure ratio the +-1 SRIP machinery admits.
/// Computed once.
inline double t_pm1() {
  static const double value = t_threshold(0.5);
  return value;
}

/// ln((1-beta)^(1-beta) beta^beta), the binomial-entropy term (negative).
inline double log_entropy_term(double beta) { return xlogx(1.0 - beta) + xlogx(beta); }

/// q_beta: the q for which f_q(beta) = 0, i.e. -3 ln((1-b)^(1-b) b^b) / (1-b).
inline double q_beta(double beta) {
  if (!(beta > 0.0 && beta < t_pm1())) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "q_beta: beta = " << beta << " must lie in (0, t_pm1) with t_pm1 ~ " << t_pm1();
    throw DomainError(msg.str());
  }
  const double q = -3.0 * log_entropy_term(beta) / (1.0 - beta);
  return std::clamp(q, std::numeric_limits<double>::min(), 0.5);
}

/// Largest admissible alpha for a given beta: min{f_{1/2}(beta), 1/12}.
/// Below f_{1/2}(beta) the lower level estimate stays positive.
inline double alpha_cap(double beta) { return std::min(f_q(0.5, beta), 1.0 / 12.0); }

/// Erasure ratio beta of the rows together with the exponential failure rate
/// alpha. Construction validates the admissible range.
class ErasureLevel {
 public:
  ErasureLevel(double beta, double alpha) : beta_(beta), alpha_(alpha) {
    if (!(beta > 0.0 && beta < t_pm1())) {
      std::ostringstream msg;
      msg.precision(6);
      msg << "erasure ratio beta = " << beta << " violates 0 < beta < t_pm1 ~ " << t_pm1();
      throw PreconditionError(msg.str());
    }
    const double cap = alpha_cap(beta);
    if (!(alpha > 0.0 && alpha < cap)) {
      std::ostringstream msg;
      msg.precision(6);
      msg << "alpha = " << alpha << " violates 0 < alpha < min{ln((1-beta)^(1-beta) beta^beta) + (1-beta)/6, 1/12} = "
          << cap;
      throw PreconditionError(msg.str());
    }
  }

  [[nodiscard]] double beta() const noexcept { return beta_; }
  [[nodiscard]] double alpha() const noexcept { return alpha_; }

 private:
  double beta_;
  double alpha_;
};

struct ThetaOmegaEstimates {
  double theta_lower = 0.0;
  double theta_tilde_lower = 0.0;
  double theta_upper = 0.0;
  double theta_tilde_upper = 0.0;
  double omega_upper = 0.0;
  double omega_lower = 0.0;
  double omega_tilde_upper = 0.0;
  double omega_tilde_lower = 0.0;
  // Same as theta_lower but with the alternative "1 - alpha" min branch;
  // reported for comparison only.
  double theta_lower_statement_variant = 0.0;
};

/// Upper estimate of omega_beta(alpha) for sub(b^2) entries.
inline double omega_upper(double beta, double alpha, double b = 1.0) {
  const double b2 = b * b;
  const double first = std::sqrt(5.0 * b2 * alpha / (1.0 - beta));
  const double second = std::sqrt(2.0 * std::numbers::e * b2 * std::log(std::numbers::e / (1.0 - beta)));
  return (first + second) * (first + second);
}

/// Level estimates theta/omega (plain and tilde-normalized). `rows`, when
/// given, decides the omega lower branch (beta * rows >= 1); without it the
/// asymptotic branch is used.
inline ThetaOmegaEstimates theta_estimates(const ErasureLevel& level, std::optional<std::uint64_t> rows = {},
                                           double b = 1.0) {
  const double beta = level.beta();
  const double alpha = level.alpha();
  const double ent = log_entropy_term(beta);
  const double first = 0.5 - 3.0 / (1.0 - beta) * (alpha - ent);

  ThetaOmegaEstimates e;
  e.theta_lower = std::min(first, 0.5 - alpha);
  e.theta_lower_statement_variant = std::min(first, 1.0 - alpha);
  e.theta_tilde_lower = (1.0 - beta) * e.theta_lower;
  e.theta_upper = 1.0;
  e.theta_tilde_upper = 1.0 - beta;
  e.omega_upper = omega_upper(beta, alpha, b);
  const bool erases_a_row = !rows || beta * static_cast<double>(*rows) >= 1.0;
  e.omega_lower = erases_a_row ? 1.0 / (1.0 - beta / 2.0) : 1.0;
  e.omega_tilde_upper = 1.0 + std::sqrt(12.0 * alpha);
  e.omega_tilde_lower = 1.0;
  return e;
}

struct SripCertificate {
  double beta = 0.0;
  double alpha = 0.0;
  std::uint64_t s = 0;
  std::uint64_t m = 0;  // columns
  std::uint64_t n = 0;  // rows
  double epsilon = 0.0;
  double theta_tilde = 0.0;
  double omega_tilde = 0.0;
  double theta_eps = 0.0;                 // lower constant, (1/n)|A_T u|^2
  double theta_eps_over_kept = 0.0;       // theta_eps / (1 - beta), (1/|T|)|A_T u|^2
  double omega_tilde_scaled = 0.0;        // omega_tilde (1 + 2 eps)
  double omega_scaled = 0.0;              // omega (1 + 2 eps)
  double log_failure_prob = 0.0;          // unclamped ln(2 (24em/(eps s))^s e^(-alpha n))
  double failure_prob_bound = 1.0;        // clamped to [0, 1]
  bool side_condition_holds = false;      // s ln(24em/(eps s)) < alpha n - ln 2
};

/// SRIP constants without enforcing the union-bound side condition. The
/// failure bound is clamped to 1 when the condition fails. Still requires
/// theta_eps > 0 and eps in (0, 1).
inline SripCertificate srip_constants(const ErasureLevel& level, std::uint64_t s, std::uint64_t m,
                                      std::uint64_t n, double epsilon, double b = 1.0) {
  if (s == 0 || s > m) throw PreconditionError("srip: sparsity s must satisfy 1 <= s <= m");
  if (n == 0) throw PreconditionError("srip: n must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw PreconditionError("srip: eps must lie in (0, 1)");

  const auto est = theta_estimates(level, n, b);
  SripCertificate c;
  c.beta = level.beta();
  c.alpha = level.alpha();
  c.s = s;
  c.m = m;
  c.n = n;
  c.epsilon = epsilon;
  c.theta_tilde = est.theta_tilde_lower;
  c.omega_tilde = est.omega_tilde_upper;

  const double root_gap = std::sqrt(c.theta_tilde) - (epsilon / 8.0) * std::sqrt(c.omega_tilde);
  if (!(root_gap > 0.0)) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "srip: theta_eps = (sqrt(theta~) - (eps/8) sqrt(omega~))^2 requires sqrt(" << c.theta_tilde
        << ") > (" << epsilon << "/8) sqrt(" << c.omega_tilde << ")";
    throw PreconditionError(msg.str());
  }
  c.theta_eps = root_gap * root_gap;
  c.theta_eps_over_kept = c.theta_eps / (1.0 - c.beta);
  c.omega_tilde_scaled = c.omega_tilde * (1.0 + 2.0 * epsilon);
  c.omega_scaled = omega_upper(c.beta, c.alpha, b) * (1.0 + 2.0 * epsilon);

  const double sd = static_cast<double>(s);
  const double net_term = sd * std::log(24.0 * std::numbers::e * static_cast<double>(m) / (epsilon * sd));
  const double an = c.alpha * static_cast<double>(n);
  c.side_condition_holds = net_term < an - std::log(2.0);
  c.log_failure_prob = std::log(2.0) + net_term - an;
  c.failure_prob_bound = std::clamp(std::exp(c.log_failure_prob), 0.0, 1.0);
  return c;
}

/// Full SRIP certificate: throws PreconditionError when the side condition
/// s ln(24em/(eps s)) < alpha n - ln 2 fails.
inline SripCertificate srip_certificate(const ErasureLevel& level, std::uint64_t s, std::uint64_t m,
                                        std::uint64_t n, double epsilon, double b = 1.0) {
  auto c = srip_constants(level, s, m, n, epsilon, b);
  if (!c.side_condition_holds) {
    const double sd = static_cast<double>(s);
    std::ostringstream msg;
    msg.precision(6);
    msg << "srip: side condition s ln(24em/(eps s)) < alpha n - ln 2 fails: "
        << sd * std::log(24.0 * std::numbers::e * static_cast<double>(m) / (epsilon * sd))
        << " >= " << c.alpha * static_cast<double>(n) - std::log(2.0);
    throw PreconditionError(msg.str());
  }
  return c;
}

struct JlCertificate {
  double beta = 0.0;
  double alpha = 0.0;
  std::uint64_t n_points = 0;
  std::uint64_t n = 0;
  double theta_tilde = 0.0;
  double omega_tilde = 0.0;
  double theta_scaled = 0.0;  // theta~ / (1 - beta)
  double omega = 0.0;
  double failure_prob_bound = 1.0;
};

/// Robust Johnson-Lindenstrauss certificate for N points. Requires
/// n > ln(N(N-1)) / alpha so that the failure bound N(N-1)e^(-alpha n) < 1.
inline JlCertificate jl_certificate(const ErasureLevel& level, std::uint64_t n_points, std::uint64_t n,
                                    double b = 1.0) {
  if (n_points < 2) throw PreconditionError("jl: needs N >= 2 points");
  const double pairs = static_cast<double>(n_points) * static_cast<double>(n_points - 1);
  const double need = std::log(pairs) / level.alpha();
  if (!(static_cast<double>(n) > need)) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "jl: requires n > ln(N(N-1))/alpha = " << need << ", got n = " << n;
    throw PreconditionError(msg.str());
  }
  const auto est = theta_estimates(level, n, b);
  JlCertificate c;
  c.beta = level.beta();
  c.alpha = level.alpha();
  c.n_points = n_points;
  c.n = n;
  c.theta_tilde = est.theta_tilde_lower;
  c.omega_tilde = est.omega_tilde_upper;
  c.theta_scaled = c.theta_tilde / (1.0 - c.beta);
  c.omega = est.omega_upper;
  c.failure_prob_bound = std::clamp(pairs * std::exp(-level.alpha() * static_cast<double>(n)), 0.0, 1.0);
  return c;
}

/// p0 in (1, 2) with Gamma((p0 + 1)/2) = sqrt(pi)/2 (the root left of the
/// minimum of Gamma; p = 2 is the other solution).
inline double p0_khinchine() {
  static const double value = [] {
    const double target = 0.5 * std::log(std::numbers::pi) - std::log(2.0);
    return specfun::find_root([target](double p) { return specfun::log_gamma(0.5 * (p + 1.0)) - target; },
                              {1.5, 1.92}, 1e-15)
        .root;
  }();
  return value;
}

struct KhinchineConstants {
  double p = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// Optimal (Haagerup) constants in Khinchine's inequality
///   a(p)|c|_2 <= (E|sum c_j eps_j|^p)^(1/p) <= b(p)|c|_2.
inline KhinchineConstants khinchine_constants(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("khinchine_constants: p must be positive");
  auto gamma_form = [p] {
    return std::sqrt(2.0) *
           std::exp((specfun::log_gamma(0.5 * (p + 1.0)) - 0.5 * std::log(std::numbers::pi)) / p);
  };
  KhinchineConstants k{p, 1.0, 1.0};
  if (p > 2.0) k.b = gamma_form();
  if (p <= p0_khinchine()) {
    k.a = std::pow(2.0, 0.5 - 1.0 / p);
  } else if (p < 2.0) {
    k.a = gamma_form();
  }
  return k;
}

/// kappa usable in the generic concentration bound exp(-kappa eps^2 n) for
/// +-1 entries.
inline constexpr double kKappaPm1 = 1.0 / 12.0;

/// exp(-(eps^2/4 - eps^3/6) m), one-sided deviation bound for +-1 matrices.
inline double concentration_bound_pm1(double epsilon, std::uint64_t m) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("concentration_bound_pm1: eps must lie in (0, 1)");
  const double e2 = epsilon * epsilon;
  return std::exp(-(e2 / 4.0 - e2 * epsilon / 6.0) * static_cast<double>(m));
}

/// exp(-kappa eps^2 n).
inline double concentration_bound_kappa(double epsilon, std::uint64_t n, double kappa = kKappaPm1) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("concentration_bound_kappa: eps must lie in (0, 1)");
  return std::exp(-kappa * epsilon * epsilon * static_cast<double>(n));
}

/// exp(-q n / 3): bound on P(|Phi x|^2 <= (1/2 - q) n) for unit x.
inline double khb_tail_bound(double q, std::uint64_t n) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("khb_tail_bound: q must lie in (0, 1)");
  return std::exp(-q * static_cast<double>(n) / 3.0);
}

/// sqrt(2 e b^2 ln(e n / k)): bound on E sqrt((1/k) sum_{j<=k} y_(j)^2) for
/// the k largest-magnitude of n i.i.d. sub(b^2) samples.
inline double order_stat_expectation_bound(std::uint64_t n, std::uint64_t k, double b = 1.0) {
  if (k == 0 || k > n) throw DomainError("order_stat_expectation_bound: requires 1 <= k <= n");
  if (!(b > 0.0)) throw DomainError("order_stat_expectation_bound: b must be positive");
  return std::sqrt(2.0 * std::numbers::e * b * b *
                   std::log(std::numbers::e * static_cast<double>(n) / static_cast<double>(k)));
}

}  // namespace erasurelab::pm1
