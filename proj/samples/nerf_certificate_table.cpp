// Prints R, P and C = R/P of the Gaussian NERF certificate on the
// lambda grid {1/5, 1/3, 1/2, 2/3, 4/5} for three beta/lambda ratios.

#include <cstdio>

#include "erasurelab/gauss_frame_bounds.hpp"

int main() {
  constexpr double nu = 0.1;
  for (const double ratio : {0.1, 0.5, 0.9}) {
    std::printf("beta/lambda = %.1f\n", ratio);
    std::printf("%8s %8s %10s %12s %12s\n", "lambda", "beta", "R", "P", "C");
    for (const double lam : {1.0 / 5, 1.0 / 3, 1.0 / 2, 2.0 / 3, 4.0 / 5}) {
      const auto c = erasurelab::gauss::nerf_certificate(nu, lam, ratio * lam);
      std::printf("%8.4f %8.4f %10.4f %12.4e %12.4e\n", lam, c.beta, c.R, c.P, c.C);
    }
    std::printf("\n");
  }
}
