#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "abx/model.hpp"

namespace abx {

/** Solution of Poisson's equation on the (k, y) chain of one global arm, indexed 2k + y. */
struct ValueFunction {
  int z = 0;
  Eigen::VectorXd v;
  double rho = 0.0;
  double poisson_residual = 0.0;
};

/** Reward g(k, y) = y. */
ValueFunction value_function(const PlatformModel& m, int z);

/** Same solve with an arbitrary reward vector over the 2(K+1) augmented states. */
ValueFunction value_function(const PlatformModel& m, int z, const Eigen::VectorXd& reward);

/**
 * Lower bound on N Var of any estimator that is unbiased for GTE over the
 * whole model class, under Bernoulli(a) customer randomization.
 */
struct CRBound {
  double sigma_ub_sq = 0.0;
  double treatment_part = 0.0;
  double control_part = 0.0;
  int K = 0;
};

CRBound cr_lower_bound(const PlatformModel& m, double a);

struct GrowthRow {
  int K = 0;
  double sigma_ub_sq = 0.0;
  double naive_limit = 0.0;
};

struct GrowthScan {
  std::vector<GrowthRow> rows;
  bool has_fit = false;
  double slope = 0.0;  // of log sigma_ub_sq against K
  double intercept = 0.0;
  double r2 = 0.0;
};

using ModelFamily = std::function<PlatformModel(int K)>;

GrowthScan growth_scan(const ModelFamily& family, const std::vector<int>& K_list, double a);

/** Ordinary least squares y = intercept + slope x with R^2. */
void linear_fit(const std::vector<double>& x, const std::vector<double>& y, double& slope, double& intercept,
                double& r2);

}  // namespace abx
