// Condition numbers of 400 x 200 Gaussian frames after erasing a random
// quarter of the rows, against the Marchenko-Pastur prediction.

#include <cstdio>

#include "erasurelab/monte_carlo.hpp"

int main() {
  erasurelab::mc::SimConfig cfg;
  cfg.rows = 400;
  cfg.cols = 200;
  cfg.beta = 0.25;
  cfg.trials = 200;
  cfg.master_seed = 2024;
  const auto s = erasurelab::mc::run_nerf_sim(cfg);
  for (const auto& q : s.quantiles)
    std::printf("q%.2f = %.4f  (99%% CI [%.4f, %.4f])\n", q.level, q.value, q.ci_lo, q.ci_hi);
  std::printf("max = %.4f, Marchenko-Pastur %zux%zu: %.4f\n", s.cond_max, s.reduced_rows, cfg.cols,
              s.marchenko_pastur_cond);
}
