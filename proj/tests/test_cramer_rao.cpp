#include <gtest/gtest.h>

#include <cmath>

#include "abx/asymptotics.hpp"
#include "abx/cramer_rao.hpp"
#include "abx/errors.hpp"
#include "abx/kernels.hpp"
#include "abx/scenarios.hpp"
#include "oracles.hpp"

using namespace abx;

namespace {

PlatformModel logit(int K) {
  LogitParams p;
  p.K = K;
  return logit_scenario(p);
}

// sum_x phi1^2/phia sum_x' P1 (v' - v + g - rho)^2, written out with plain loops on unlogged phi.
double direct_bound(const PlatformModel& m, double a) {
  double total = 0.0;
  auto pa = augmented_kernel(m, Arm::experiment(a));
  for (int z = 0; z < 2; ++z) {
    auto A = augmented_kernel(m, z ? Arm::treatment() : Arm::control());
    auto vf = value_function(m, z);
    double part = 0.0;
    for (int x = 0; x < A.P.rows(); ++x) {
      if (A.phi(x) == 0.0) continue;
      double inner = 0.0;
      for (int xp = 0; xp < A.P.cols(); ++xp) {
        double d = vf.v(xp) - vf.v(x) + (x % 2) - vf.rho;
        inner += A.P(x, xp) * d * d;
      }
      part += A.phi(x) * A.phi(x) / pa.phi(x) * inner;
    }
    total += part / (z ? a : 1 - a);
  }
  return total;
}

}  // namespace

TEST(ValueFunction, RecursionsOnLogit) {
  auto m = logit(100);
  for (int z = 0; z < 2; ++z) {
    auto vf = value_function(m, z);
    auto r = oracle::recursion_residuals(m, vf);
    EXPECT_LE(r.max(), 1e-9) << "z=" << z << " full " << r.full_state << " interior " << r.interior << " empty "
                             << r.empty_state << " booked " << r.booked;
    EXPECT_LE(vf.poisson_residual, 1e-9);
    auto A = augmented_kernel(m, z ? Arm::treatment() : Arm::control());
    EXPECT_LE(std::abs(A.phi.dot(vf.v)), 1e-9);
    EXPECT_NEAR(vf.rho, booking_rate(m, z ? Arm::treatment() : Arm::control()), 1e-12);
  }
}

TEST(ValueFunction, DecreasingInState) {
  auto m = logit(60);
  for (int z = 0; z < 2; ++z) {
    auto vf = value_function(m, z);
    for (int k = 0; k < m.K; ++k) EXPECT_LT(vf.v(2 * (k + 1)), vf.v(2 * k)) << k;
  }
}

TEST(ValueFunction, ConstantRewardGivesZero) {
  auto m = logit(30);
  Eigen::VectorXd g = Eigen::VectorXd::Constant(2 * (m.K + 1), 0.7);
  auto vf = value_function(m, 1, g);
  EXPECT_LE(vf.v.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(vf.rho, 0.7, 1e-14);
}

TEST(ValueFunction, RandomModelsRecursions) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 15; ++t) {
    auto m = oracle::random_model(rng, 2 + t);
    for (int z = 0; z < 2; ++z) {
      auto vf = value_function(m, z);
      EXPECT_LE(oracle::recursion_residuals(m, vf).max(), 1e-9) << t;
    }
  }
}

TEST(CrLowerBound, MatchesDirectEvaluation) {
  for (auto m : {logit(20), logit(60), example_sign_inconsistent_alt(), as_aa(logit(30))}) {
    auto b = cr_lower_bound(m, 0.5);
    EXPECT_NEAR(b.sigma_ub_sq, direct_bound(m, 0.5), 1e-10 * b.sigma_ub_sq);
    EXPECT_NEAR(b.sigma_ub_sq, b.treatment_part + b.control_part, 0.0);
    EXPECT_GT(b.sigma_ub_sq, 0.0);
  }
}

TEST(CrLowerBound, AAIsFinite) {
  auto m = as_aa(logit(50));
  auto b = cr_lower_bound(m, 0.5);
  EXPECT_TRUE(std::isfinite(b.sigma_ub_sq));
  EXPECT_GT(b.sigma_ub_sq, 0.0);
}

TEST(CrLowerBound, RejectsBadAllocation) {
  EXPECT_THROW(cr_lower_bound(logit(10), 0.0), ValidationError);
}

TEST(GrowthScan, SingleRowHasNoFit) {
  auto s = growth_scan([](int K) { return logit(K); }, {40}, 0.5);
  ASSERT_EQ(s.rows.size(), 1u);
  EXPECT_FALSE(s.has_fit);
}

TEST(GrowthScan, NaiveLimitBounded) {
  auto s = growth_scan([](int K) { return logit(K); }, {100, 150, 200}, 0.5);
  for (const auto& r : s.rows) EXPECT_LE(r.naive_limit, (1 / 0.5 + 1 / 0.5) / 4);
  EXPECT_TRUE(s.has_fit);
}

TEST(GrowthScan, ExponentialGrowthInASeparatedMeanFieldFamily) {
  // strong treatment in a mean-field family: log bound grows linearly in K
  LogitParams p;
  p.outside_scales_with_K = true;
  p.delta = 1.5;
  auto L = logit_limits(p);
  auto s = growth_scan([&](int K) { return meanfield_family(L, K); }, {100, 150, 200, 250, 300}, 0.5);
  EXPECT_GT(s.slope, 0.0);
  EXPECT_GT(s.r2, 0.99);
}

TEST(LinearFit, ExactLine) {
  double slope, icpt, r2;
  linear_fit({1, 2, 3}, {3, 5, 7}, slope, icpt, r2);
  EXPECT_NEAR(slope, 2.0, 1e-15);
  EXPECT_NEAR(icpt, 1.0, 1e-14);
  EXPECT_NEAR(r2, 1.0, 1e-15);
}
