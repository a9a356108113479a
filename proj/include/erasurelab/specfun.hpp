#pragma once

// Scalar special functions and 1-D root/optimum finders used by the bound
// computations. Everything here is a pure function of its arguments.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "erasurelab/error.hpp"

namespace erasurelab::specfun {

/// Closed bracket [lo, hi] for the root and optimum finders.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] double width() const noexcept { return hi - lo; }
  [[nodiscard]] bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

struct RootResult {
  double root = 0.0;
  double residual = 0.0;  // |f(root)|
  int iterations = 0;
};

struct MaxResult {
  double argmax = 0.0;
  double max = -std::numeric_limits<double>::infinity();
};

enum class Spacing { linear, logarithmic };

inline constexpr double kRootTolerance = 1e-10;
inline constexpr double kSupremumTolerance = 1e-6;
// Inputs this far below -1/e are still accepted by lambert_w0 and clamped.
inline constexpr double kBranchGuard = 1e-12;

namespace detail {

inline Interval checked(Interval iv, const char* what) {
  if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi) {
    std::ostringstream msg;
    msg << what << ": invalid interval [" << iv.lo << ", " << iv.hi << "]";
    throw DomainError(msg.str());
  }
  return iv;
}

// x ln x with the continuous extension 0 at x = 0.
inline double xlogx(double x) noexcept { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace detail

/// Principal branch W0 of the Lambert W function: the w >= -1 solving
/// w e^w = z, for z >= -1/e.
///
/// Starting points: a branch-point series in p = sqrt(2(ez + 1)) near -1/e,
/// ln z - ln ln z for large z, log1p(z) elsewhere; then Halley iteration.
inline double lambert_w0(double z) {
  constexpr double inv_e = 1.0 / std::numbers::e;
  if (std::isnan(z)) throw DomainError("lambert_w0: z is NaN");
  if (z < -inv_e - kBranchGuard) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "lambert_w0: z = " << z << " is below the branch point -1/e";
    throw DomainError(msg.str());
  }
  if (z <= -inv_e) return -1.0;
  if (z == 0.0) return 0.0;
  if (std::isinf(z)) return z;

  double w;
  if (z < -0.25) {
    const double p = std::sqrt(2.0 * (std::numbers::e * z + 1.0));
    w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
  } else if (z > 3.0) {
    const double lz = std::log(z);
    w = lz - std::log(lz);
  } else {
    w = std::log1p(z);
    if (z < 0.0) w = z * (1.0 - z);  // log1p undershoots badly near -1/4
  }

  for (int it = 0; it < 64; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    const double next = std::max(w - step, -1.0);
    if (!std::isfinite(next)) break;
    const bool done = std::abs(next - w) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(next));
    w = next;
    if (done) break;
  }
  return w;
}

/// ln Gamma(x) for x > 0 (Lanczos, g = 7, nine terms).
inline double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream msg;
    msg << "log_gamma: x = " << x << " must be positive and finite";
    throw DomainError(msg.str());
  }
  if (x < 0.5) return log_gamma(x + 1.0) - std::log(x);

  static constexpr std::array<double, 9> coeff = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  constexpr double g = 7.0;
  const double xm1 = x - 1.0;
  double a = coeff[0];
  for (std::size_t i = 1; i < coeff.size(); ++i) a += coeff[i] / (xm1 + static_cast<double>(i));
  const double t = xm1 + g + 0.5;
  const double half_log_two_pi = 0.91893853320467274178;
  return half_log_two_pi + (xm1 + 0.5) * std::log(t) - t + std::log(a);
}

/// Regularized lower incomplete gamma P(s, z) = gamma(s, z) / Gamma(s).
inline double reg_lower_gamma(double s, double z) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("reg_lower_gamma: s must be positive and finite");
  if (!(z >= 0.0) || std::isnan(z)) throw DomainError("reg_lower_gamma: z must be nonnegative");
  if (z == 0.0) return 0.0;
  if (std::isinf(z)) return 1.0;

  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double log_prefactor = s * std::log(z) - z - log_gamma(s);

  if (z < s + 1.0) {
    // gamma(s,z) = z^s e^-z sum_i z^i / (s (s+1) ... (s+i))
    double term = 1.0 / s;
    double sum = term;
    for (int i = 1; i < 100000; ++i) {
      term *= z / (s + i);
      sum += term;
      if (term < sum * eps) break;
    }
    return std::min(1.0, std::exp(log_prefactor) * sum);
  }

  // Upper tail by modified Lentz continued fraction.
  constexpr double tiny = 1e-300;
  double b = z + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < eps) break;
  }
  return std::clamp(1.0 - std::exp(log_prefactor) * h, 0.0, 1.0);
}

/// P(X <= t) for X ~ chi-squared with `dof` degrees of freedom.
inline double chi2_lower_cdf(std::uint64_t dof, double t) {
  if (dof == 0) throw DomainError("chi2_lower_cdf: dof must be >= 1");
  if (!(t >= 0.0)) throw DomainError("chi2_lower_cdf: t must be nonnegative");
  return reg_lower_gamma(0.5 * static_cast<double>(dof), 0.5 * t);
}

/// ln C(n, k).
inline double log_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) {
    std::ostringstream msg;
    msg << "log_binomial: k = " << k << " exceeds n = " << n;
    throw DomainError(msg.str());
  }
  const std::uint64_t j = std::min(k, n - k);
  if (j == 0) return 0.0;
  if (j > 100000) {
    return log_gamma(static_cast<double>(n) + 1.0) - log_gamma(static_cast<double>(k) + 1.0) -
           log_gamma(static_cast<double>(n - k) + 1.0);
  }
  double acc = 0.0;
  const double base = static_cast<double>(n - j);
  for (std::uint64_t i = 1; i <= j; ++i) acc += std::log1p(base / static_cast<double>(i));
  return acc;
}

/// Log of the Stirling-type upper bound
///   C(n,k) <= e/(sqrt(2) pi) * exp(n ln((1-g)^-(1-g) g^-g)),  g = k/n,
/// valid for 1 <= k <= n-1.
inline double log_binomial_stirling_bound(std::uint64_t n, std::uint64_t k) {
  if (k == 0 || k >= n) throw DomainError("log_binomial_stirling_bound: requires 1 <= k <= n-1");
  const double g = static_cast<double>(k) / static_cast<double>(n);
  const double log_lead = 1.0 - 0.5 * std::log(2.0) - std::log(std::numbers::pi);
  return log_lead - static_cast<double>(n) * (detail::xlogx(1.0 - g) + detail::xlogx(g));
}

/// Bisection on a sign-changing bracket. Stops when the bracket is no wider
/// than `tol` (or cannot shrink further in double precision).
template <class F>
RootResult find_root(F&& f, Interval bracket, double tol = kRootTolerance, int max_iterations = 2000) {
  detail::checked(bracket, "find_root");
  double lo = bracket.lo;
  double hi = bracket.hi;
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return {lo, 0.0, 0};
  if (fhi == 0.0) return {hi, 0.0, 0};
  if (!(flo * fhi < 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "find_root: no sign change on [" << lo << ", " << hi << "] (f(lo) = " << flo << ", f(hi) = " << fhi
        << ")";
    throw ConvergenceError(msg.str());
  }
  int it = 0;
  while (hi - lo > tol) {
    if (++it > max_iterations) throw ConvergenceError("find_root: iteration limit reached");
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return {mid, 0.0, it};
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  // Report whichever endpoint has the smaller residual.
  if (std::abs(flo) <= std::abs(fhi)) return {lo, std::abs(flo), it};
  return {hi, std::abs(fhi), it};
}

/// Maximizes f over `domain`: a grid scan (log-spaced by default) followed by
/// golden-section refinement on the two cells around the best grid point.
///
/// With logarithmic spacing the refinement runs in ln x and `tol` is a width
/// in ln x; a nonpositive lower end is floored at hi * 1e-12. The returned
/// maximum is never below any grid sample.
template <class F>
MaxResult maximize_1d(F&& f, Interval domain, double tol = kSupremumTolerance,
                      Spacing spacing = Spacing::logarithmic, std::size_t grid_points = 256) {
  detail::checked(domain, "maximize_1d");
  grid_points = std::max<std::size_t>(grid_points, 3);

  const bool logspace = spacing == Spacing::logarithmic && domain.hi > 0.0;
  double lo = domain.lo;
  if (logspace && lo <= 0.0) lo = domain.hi * 1e-12;
  const double u_lo = logspace ? std::log(lo) : lo;
  const double u_hi = logspace ? std::log(domain.hi) : domain.hi;
  auto to_x = [&](double u) { return logspace ? std::clamp(std::exp(u), lo, domain.hi) : u; };
  auto eval = [&](double u) {
    const double v = f(to_x(u));
    return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
  };

  if (u_hi == u_lo) return {to_x(u_lo), eval(u_lo)};

  std::vector<double> grid(grid_points);
  std::size_t best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid_points; ++i) {
    grid[i] = i + 1 == grid_points ? u_hi
                                    : u_lo + (u_hi - u_lo) * static_cast<double>(i) /
                                                 static_cast<double>(grid_points - 1);
    const double v = eval(grid[i]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }

  MaxResult result{to_x(grid[best]), best_val};
  double a = grid[best == 0 ? 0 : best - 1];
  double b = grid[best + 1 == grid_points ? best : best + 1];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  for (int it = 0; it < 500 && (b - a) > tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
  }
  for (const auto& [u, v] : {std::pair{c, fc}, std::pair{d, fd}}) {
    if (v > result.max) result = {to_x(u), v};
  }
  return result;
}

}  // namespace erasurelab::specfun
