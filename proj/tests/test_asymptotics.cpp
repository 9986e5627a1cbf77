#include <gtest/gtest.h>

#include <cmath>

#include "abx/asymptotics.hpp"
#include "abx/errors.hpp"
#include "abx/kernels.hpp"
#include "abx/scenarios.hpp"
#include "abx/simulator.hpp"
#include "oracles.hpp"

using namespace abx;

namespace {

PlatformModel logit(int K) {
  LogitParams p;
  p.K = K;
  return logit_scenario(p);
}

PlatformModel k1(double p0, double p1) {
  PlatformModel m;
  m.K = 1;
  m.lambda = 1.3;
  m.tau = {0.7};
  m.p0 = {p0, 0.0};
  m.p1 = {p1, 0.0};
  return m;
}

}  // namespace

TEST(CenteredVariance, ConstantOutcomes) {
  auto m = k1(0.0, 0.0);
  EXPECT_EQ(centered_variance(m, 0.5, 0), 0.0);
}

TEST(CenteredVariance, BernoulliWhenFullStateUnreachable) {
  // p(K) = 0 is forced, so use K = 2 with the full state reachable only through p(1) = 0
  PlatformModel m;
  m.K = 2;
  m.lambda = 1.0;
  m.tau = {1.0, 1.0};
  m.p0 = {0.3, 0.0, 0.0};
  m.p1 = m.p0;
  // states 0 and 1 only; outcome is Bernoulli(0.3) at k = 0 and 0 at k = 1
  auto pi = steady_state(m, Arm::experiment(0.5));
  EXPECT_EQ(pi[2], 0.0);
  double mz = pi[0] * 0.3;
  EXPECT_NEAR(centered_variance(m, 0.5, 0), mz * (1 - mz), 1e-15);
}

TEST(CenteredVariance, Bounds) {
  auto m = logit(100);
  for (int z = 0; z < 2; ++z) {
    double v = centered_variance(m, 0.5, z);
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, 0.25);
  }
  EXPECT_THROW(centered_variance(m, 0.0, 0), ValidationError);
  EXPECT_THROW(centered_variance(m, 0.5, 2), ValidationError);
}

TEST(FundamentalSolve, ZeroRhs) {
  Eigen::MatrixXd P(2, 2);
  P << 0.5, 0.5, 0.5, 0.5;
  Eigen::VectorXd pi(2);
  pi << 0.5, 0.5;
  EXPECT_EQ(fundamental_solve(P, pi, Eigen::VectorXd::Zero(2)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(FundamentalSolve, TwoStateAgainstTruncation) {
  Eigen::MatrixXd P(2, 2);
  P << 0.5, 0.5, 0.5, 0.5;
  Eigen::VectorXd pi(2), r(2);
  pi << 0.5, 0.5;
  r << 1.0, -1.0;
  auto x = fundamental_solve(P, pi, r);
  auto ref = oracle::truncated_power_sum(P, r, 1e-16, 200);
  EXPECT_LE((x - ref).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_NEAR(x(0), 1.0, 1e-14);

  P << 0.9, 0.1, 0.3, 0.7;
  pi << 0.75, 0.25;
  r << 1.0, -3.0;
  x = fundamental_solve(P, pi, r);
  ref = oracle::truncated_power_sum(P, r, 1e-16, 10000);
  EXPECT_LE((x - ref).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(FundamentalSolve, LogitSeenStateKernelAgainstTruncation) {
  auto m = logit(100);
  auto M = seen_state_kernel(m, Arm::experiment(0.5));
  Eigen::VectorXd pi = steady_state(m, Arm::experiment(0.5)).vec();
  Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(m.p1.data(), m.K + 1);
  r.array() -= pi.dot(r);
  auto x = fundamental_solve(M, pi, r);
  auto ref = oracle::truncated_power_sum(M, r, 1e-14);
  EXPECT_LE((x - ref).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(FundamentalSolve, Errors) {
  Eigen::MatrixXd P(2, 2);
  P << 0.9, 0.1, 0.3, 0.7;
  Eigen::VectorXd pi(2), r(2);
  pi << 0.5, 0.5;
  r << 1.0, -1.0;
  EXPECT_THROW(fundamental_solve(P, pi, r), NumericalError);  // pi not invariant
  pi << 0.75, 0.25;
  r << 1.0, 1.0;
  EXPECT_THROW(fundamental_solve(P, pi, r), NumericalError);  // rhs not centered
  Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
  pi << 0.5, 0.5;
  r << 1.0, -1.0;
  EXPECT_THROW(fundamental_solve(I, pi, r), NumericalError);  // reducible: two closed classes
}

TEST(CovTail, AACancels) {
  for (int K : {1, 10, 50}) {
    auto m = as_aa(logit(K));
    EXPECT_LE(std::abs(cov_tail_sum(m, 0.5)), 1e-10);
    EXPECT_LE(std::abs(cov_tail_sum(m, 0.3)), 1e-10);
  }
}

TEST(CovTail, MatchesTruncatedSummation) {
  std::vector<PlatformModel> models{k1(0.6, 0.8), logit(20), logit(50), example_sign_inconsistent_alt()};
  std::mt19937_64 rng(5);
  for (int t = 0; t < 5; ++t) models.push_back(oracle::random_model(rng, 3 + t * 4));
  for (const auto& m : models) {
    for (double a : {0.3, 0.5}) {
      EXPECT_NEAR(cov_tail_sum(m, a), oracle::cov_tail_truncated(m, a), 1e-8) << "K=" << m.K << " a=" << a;
    }
  }
}

TEST(DmAsymptoticVariance, AAReport) {
  auto m = as_aa(logit(60));
  auto r = dm_asymptotic_variance(m, 0.5);
  EXPECT_NEAR(r.sigma_tilde_sq, r.naive_limit, 1e-10);
  EXPECT_NEAR(r.sigma_tilde_sq, (1 / 0.5 + 1 / 0.5) * r.v0, 1e-12);
  EXPECT_EQ(r.gte, 0.0);
  auto j = to_json(r);
  for (const char* key : {"gte", "ade", "v0", "v1", "cov_tail", "sigma_tilde_sq", "naive_limit", "a"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j.size(), 8u);
}

TEST(DmAsymptoticVariance, DegenerateRejected) {
  EXPECT_THROW(dm_asymptotic_variance(k1(0.0, 0.0), 0.5), NumericalError);
}

TEST(DmAsymptoticVariance, NaiveLimitBound) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    auto m = oracle::random_model(rng, 2 + t);
    for (double a : {0.2, 0.5, 0.8}) {
      auto r = dm_asymptotic_variance(m, a);
      EXPECT_LE(r.naive_limit, (1 / a + 1 / (1 - a)) / 4 + 1e-15);
      EXPECT_NEAR(r.naive_limit, r.v1 / a + r.v0 / (1 - a), 1e-15);
      EXPECT_GT(r.sigma_tilde_sq, 0.0);
    }
  }
}

// Sample variance of Y among control customers in long runs matches V(0).
TEST(CenteredVariance, MonteCarloCrossCheck) {
  auto m = logit(100);
  SimConfig c;
  c.model = m;
  c.a = 0.5;
  c.N = 20000;
  c.initial = InitialState::from(steady_state(m, Arm::experiment(0.5)));
  const int R = 40;
  std::vector<double> per_run;
  std::vector<CustomerRecord> rec;
  for (int r = 0; r < R; ++r) {
    Rng rng = replication_stream(31, r);
    simulate_trajectory(c, rng, &rec);
    double s = 0, s2 = 0;
    long n = 0;
    for (const auto& x : rec) {
      if (x.z == 0) {
        s += x.y;
        s2 += x.y * x.y;
        ++n;
      }
    }
    double mean = s / n;
    per_run.push_back(s2 / n - mean * mean);
  }
  double mean = 0, sq = 0;
  for (double v : per_run) mean += v / R;
  for (double v : per_run) sq += (v - mean) * (v - mean);
  double se = std::sqrt(sq / (R - 1) / R);
  EXPECT_NEAR(mean, centered_variance(m, 0.5, 0), 3 * se);
}
