#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "erasurelab/error.hpp"
#include "erasurelab/pm1_bounds.hpp"
#include "oracles.hpp"

using namespace erasurelab;
using namespace erasurelab::pm1;

namespace {

// ln((1-b)^(1-b) b^b) written out independently of the library helper.
double entropy_log(double b) { return (1 - b) * std::log(1 - b) + b * std::log(b); }

}  // namespace

TEST(FQ, Examples) {
  EXPECT_LT(std::abs(f_q(0.5, 0.0376)), 2e-4);
  for (double q : {0.1, 0.3, 0.5}) EXPECT_NEAR(f_q(q, 0.5), std::log(0.5) + q / 6.0, 1e-15);
  EXPECT_NEAR(f_q(0.3, 1e-300), 0.1, 1e-12);
  EXPECT_NEAR(f_q(0.3, 0.0), 0.1, 1e-15);
  EXPECT_THROW(f_q(0.6, 0.1), DomainError);
  EXPECT_THROW(f_q(0.3, 1.1), DomainError);
}

TEST(TThreshold, Examples) {
  EXPECT_NEAR(t_threshold(0.5), 0.0376, 5e-4);
  EXPECT_DOUBLE_EQ(t_pm1(), t_threshold(0.5));
  EXPECT_LT(t_threshold(1e-6), 1e-5);
  EXPECT_LT(t_threshold(0.2), t_threshold(0.3));
}

TEST(TThreshold, MonotoneWithSmallResidual) {
  double prev = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double q = 0.5 * i / 100.0;
    const double t = t_threshold(q);
    EXPECT_GE(t, prev);
    EXPECT_GT(t, 0.0);
    EXPECT_LT(t, 0.5);
    EXPECT_LE(std::abs(f_q(q, t)), 1e-9) << "q=" << q;
    prev = t;
  }
}

TEST(QBeta, Examples) {
  EXPECT_NEAR(q_beta(0.01), 0.1697, 5e-5);
  const double by_bisection = oracle::bisect([](double q) { return entropy_log(0.01) + q / 3.0 * 0.99; }, 1e-9, 0.5);
  EXPECT_NEAR(q_beta(0.01), by_bisection, 1e-12);
  EXPECT_NEAR(q_beta(std::nextafter(t_pm1(), 0.0)), 0.5, 1e-9);
  EXPECT_THROW(q_beta(t_pm1()), DomainError);
  EXPECT_THROW(q_beta(0.05), DomainError);
  EXPECT_THROW(q_beta(0.0), DomainError);
}

TEST(QBeta, SolvesDefiningEquation) {
  for (int i = 1; i < 50; ++i) {
    const double beta = t_pm1() * i / 50.0;
    EXPECT_LE(std::abs(f_q(q_beta(beta), beta)), 1e-9) << "beta=" << beta;
  }
}

TEST(ErasureLevel, RejectsOutOfRange) {
  EXPECT_THROW(ErasureLevel(0.05, 0.01), PreconditionError);
  EXPECT_THROW(ErasureLevel(0.01, 0.0), PreconditionError);
  EXPECT_THROW(ErasureLevel(0.01, 1.0 / 12.0), PreconditionError);
  EXPECT_THROW(ErasureLevel(0.03, 0.03), PreconditionError);  // above f_{1/2}(0.03)
  EXPECT_NO_THROW(ErasureLevel(0.01, 0.02));
}

TEST(ThetaEstimates, Examples) {
  const auto small = theta_estimates(ErasureLevel(1e-12, 0.05));
  EXPECT_NEAR(small.theta_lower, 0.35, 1e-9);

  const double alpha_max = std::nextafter(1.0 / 12.0, 0.0);
  EXPECT_NEAR(theta_estimates(ErasureLevel(1e-4, alpha_max)).omega_tilde_upper, 2.0, 1e-12);

  const auto e = theta_estimates(ErasureLevel(0.01, 0.02));
  const double expected = std::min(0.5 - 3.0 / 0.99 * (0.02 - entropy_log(0.01)), 0.48);
  EXPECT_NEAR(entropy_log(0.01), -0.0560, 5e-5);
  EXPECT_NEAR(e.theta_lower, expected, 1e-14);
  EXPECT_NEAR(e.theta_tilde_lower, 0.99 * e.theta_lower, 1e-15);
  EXPECT_DOUBLE_EQ(e.theta_upper, 1.0);
  EXPECT_DOUBLE_EQ(e.theta_tilde_upper, 0.99);
  const double om = std::sqrt(5 * 0.02 / 0.99) + std::sqrt(2 * std::numbers::e * std::log(std::numbers::e / 0.99));
  EXPECT_NEAR(e.omega_upper, om * om, 1e-12);
  EXPECT_NEAR(e.omega_lower, 1.0 / (1.0 - 0.005), 1e-15);
  EXPECT_NEAR(theta_estimates(ErasureLevel(0.01, 0.02), 50).omega_lower, 1.0, 0.0);
}

TEST(ThetaEstimates, OrderedOnAdmissibleGrid) {
  for (int i = 1; i < 30; ++i) {
    const double beta = t_pm1() * i / 30.0;
    const double cap = alpha_cap(beta);
    for (int j = 1; j < 20; ++j) {
      const auto e = theta_estimates(ErasureLevel(beta, cap * j / 20.0));
      EXPECT_LE(e.theta_lower, e.theta_upper);
      EXPECT_LE(e.theta_tilde_lower, e.theta_tilde_upper);
      EXPECT_LE(e.omega_lower, e.omega_upper);
      EXPECT_LE(e.omega_tilde_lower, e.omega_tilde_upper);
      EXPECT_GE(e.theta_lower, 0.0);
    }
  }
}

TEST(SripCertificate, Examples) {
  const ErasureLevel level(0.01, 0.02);
  const auto c = srip_certificate(level, 2, 64, 4096, 0.25);
  const double expected = 2.0 * std::pow(24.0 * std::numbers::e * 64 / (0.25 * 2), 2) * std::exp(-0.02 * 4096);
  EXPECT_NEAR(c.failure_prob_bound / expected, 1.0, 1e-10);
  EXPECT_TRUE(c.side_condition_holds);
  EXPECT_GT(c.theta_eps, 0.0);
  EXPECT_NEAR(c.theta_eps, std::pow(std::sqrt(c.theta_tilde) - 0.25 / 8 * std::sqrt(c.omega_tilde), 2), 1e-15);
  EXPECT_NEAR(c.omega_tilde_scaled, (1 + std::sqrt(0.24)) * 1.5, 1e-14);

  const double eps_zero = 8.0 * std::sqrt(c.theta_tilde / c.omega_tilde);
  if (eps_zero < 1.0) {
    EXPECT_THROW(srip_certificate(level, 2, 64, 4096, eps_zero), PreconditionError);
  }
  EXPECT_THROW(srip_certificate(level, 2, 64, 100, 0.25), PreconditionError);
  EXPECT_THROW(srip_certificate(level, 0, 64, 4096, 0.25), PreconditionError);
}

TEST(SripCertificate, ThetaZeroBoundaryRejected) {
  // A level where 8 sqrt(theta~/omega~) < 1 puts the algebraic zero inside (0, 1).
  const ErasureLevel level(0.03, 0.024);
  const auto e = theta_estimates(level);
  const double eps_zero = 8.0 * std::sqrt(e.theta_tilde_lower / e.omega_tilde_upper);
  ASSERT_LT(eps_zero, 1.0);
  EXPECT_THROW(srip_constants(level, 2, 64, 100000, eps_zero), PreconditionError);
}

TEST(SripCertificate, FailureBoundMonotone) {
  const ErasureLevel level(0.01, 0.02);
  double prev = 2.0;
  for (std::uint64_t n = 500; n <= 8000; n += 500) {
    const double b = srip_constants(level, 2, 64, n, 0.25).failure_prob_bound;
    EXPECT_LE(b, prev);
    prev = b;
  }
  prev = -std::numeric_limits<double>::infinity();
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const double lb = srip_constants(level, s, 64, 8000, 0.25).log_failure_prob;
    EXPECT_GE(lb, prev);
    prev = lb;
  }
}

TEST(JlCertificate, Examples) {
  const double alpha = std::log(4.0) / 100.0;
  EXPECT_NEAR(jl_certificate(ErasureLevel(0.01, alpha), 2, 100).failure_prob_bound, 0.5, 1e-12);
  const auto c = jl_certificate(ErasureLevel(0.01, 0.02), 10, 2000);
  EXPECT_NEAR(c.failure_prob_bound / (90.0 * std::exp(-40.0)), 1.0, 1e-12);
  EXPECT_NEAR(c.theta_scaled, c.theta_tilde / 0.99, 1e-15);
  EXPECT_THROW(jl_certificate(ErasureLevel(0.01, 0.02), 10, 200), PreconditionError);
  EXPECT_THROW(jl_certificate(ErasureLevel(0.01, 0.02), 1, 2000), PreconditionError);
}

TEST(Khinchine, Constants) {
  const auto two = khinchine_constants(2.0);
  EXPECT_DOUBLE_EQ(two.a, 1.0);
  EXPECT_DOUBLE_EQ(two.b, 1.0);
  EXPECT_NEAR(khinchine_constants(4.0).b, std::pow(3.0, 0.25), 1e-13);
  EXPECT_NEAR(khinchine_constants(1.0).a, std::sqrt(0.5), 1e-15);
  for (double p : {0.5, 1.0, 1.5, 1.9, 2.0, 3.0, 6.0}) {
    const auto k = khinchine_constants(p);
    EXPECT_LE(k.a, k.b);
    if (p <= 2.0) {
      EXPECT_EQ(k.b, 1.0);
    }
  }
  EXPECT_THROW(khinchine_constants(0.0), DomainError);
}

TEST(Khinchine, P0) {
  const double p0 = p0_khinchine();
  EXPECT_NEAR(p0, 1.8474, 1e-4);
  EXPECT_LE(std::abs(std::tgamma(0.5 * (p0 + 1.0)) - std::sqrt(std::numbers::pi) / 2.0), 1e-10);
  // Gamma is below sqrt(pi)/2 between p0 and 2, and equals it at p = 2.
  EXPECT_LT(std::tgamma(0.5 * (1.9 + 1.0)), std::sqrt(std::numbers::pi) / 2.0);
  EXPECT_NEAR(std::tgamma(1.5), std::sqrt(std::numbers::pi) / 2.0, 1e-15);
  // Both branches of a(p) agree at p0.
  EXPECT_NEAR(std::pow(2.0, 0.5 - 1.0 / p0),
              std::sqrt(2.0) * std::pow(std::tgamma(0.5 * (p0 + 1)) / std::sqrt(std::numbers::pi), 1.0 / p0), 1e-9);
}

TEST(Concentration, Examples) {
  EXPECT_DOUBLE_EQ(concentration_bound_pm1(0.5, 0), 1.0);
  EXPECT_NEAR(concentration_bound_pm1(0.5, 100), std::exp(-(1.0 / 16 - 1.0 / 48) * 100), 1e-15);
  const double eps = 1e-4;
  EXPECT_NEAR(-std::log(concentration_bound_pm1(eps, 1000)) / (eps * eps * 1000), 0.25, 1e-4);
  EXPECT_NEAR(concentration_bound_kappa(0.3, 300), std::exp(-0.09 * 300 / 12), 1e-15);
  EXPECT_DOUBLE_EQ(kKappaPm1, 1.0 / 12.0);
}

TEST(KhbTail, Examples) {
  EXPECT_DOUBLE_EQ(khb_tail_bound(0.3, 0), 1.0);
  EXPECT_NEAR(khb_tail_bound(0.3, 300), std::exp(-30.0), 1e-25);
  EXPECT_NEAR(khb_tail_bound(1e-12, 10), 1.0, 1e-10);
  EXPECT_THROW(khb_tail_bound(1.0, 10), DomainError);
}

TEST(OrderStatBound, Examples) {
  EXPECT_NEAR(order_stat_expectation_bound(50, 50), std::sqrt(2 * std::numbers::e), 1e-15);
  EXPECT_NEAR(order_stat_expectation_bound(100, 10), std::sqrt(2 * std::numbers::e * std::log(10 * std::numbers::e)),
              1e-15);
  EXPECT_NEAR(order_stat_expectation_bound(100, 10, 2.0), 2.0 * order_stat_expectation_bound(100, 10), 1e-14);
  EXPECT_THROW(order_stat_expectation_bound(10, 11), DomainError);
}
