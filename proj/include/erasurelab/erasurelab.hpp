#pragma once

#include "erasurelab/error.hpp"
#include "erasurelab/gauss_frame_bounds.hpp"
#include "erasurelab/matrix_lab.hpp"
#include "erasurelab/monte_carlo.hpp"
#include "erasurelab/parallel.hpp"
#include "erasurelab/pm1_bounds.hpp"
#include "erasurelab/report.hpp"
#include "erasurelab/rng.hpp"
#include "erasurelab/specfun.hpp"
#include "erasurelab/stats.hpp"
#include "erasurelab/verification.hpp"
