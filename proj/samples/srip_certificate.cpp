// SRIP constants for a 4096 x 64 +-1 matrix that loses 1% of its rows.

#include <cstdio>

#include "erasurelab/pm1_bounds.hpp"

int main() {
  namespace pm1 = erasurelab::pm1;
  std::printf("t_pm1 = %.6f, p0 = %.6f\n", pm1::t_pm1(), pm1::p0_khinchine());

  const pm1::ErasureLevel level(0.01, 0.02);
  const auto est = pm1::theta_estimates(level, 4096);
  std::printf("theta in [%.4f, %.4f], omega in [%.4f, %.4f]\n", est.theta_lower, est.theta_upper, est.omega_lower,
              est.omega_upper);

  const auto cert = pm1::srip_certificate(level, 2, 64, 4096, 0.25);
  std::printf("%.4f |u|^2 <= (1/n)|A_T u|^2 <= %.4f |u|^2 for all 2-sparse u and |T^c| <= 40\n", cert.theta_eps,
              cert.omega_tilde_scaled);
  std::printf("failure probability <= %.3e (ln = %.2f)\n", cert.failure_prob_bound, cert.log_failure_prob);
}
