#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "abx/model.hpp"

namespace abx {

struct AsymptoticReport {
  double gte = 0.0;
  double ade = 0.0;
  double v0 = 0.0;
  double v1 = 0.0;
  double cov_tail = 0.0;
  double sigma_tilde_sq = 0.0;
  double naive_limit = 0.0;
  double a = 0.0;
  std::vector<std::string> warnings;
};

nlohmann::json to_json(const AsymptoticReport& r);

/** Var(Y | Z = z) for a customer arriving in the experiment's steady state. */
double centered_variance(const PlatformModel& m, double a, int z);

/**
 * x = sum_{j>=0} P^j rhs for a centered rhs, via (I - P + 1 stationary^T) x = rhs.
 * Throws NumericalError when stationary is not invariant, rhs is not centered,
 * the system is singular, or the residual exceeds 1e-9 (relative to |x|).
 */
Eigen::VectorXd fundamental_solve(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& stationary,
                                  const Eigen::VectorXd& rhs);

/** sum_{j>=2} [C_j(0,0) + C_j(1,1) - C_j(0,1) - C_j(1,0)] for the experiment at allocation a. */
double cov_tail_sum(const PlatformModel& m, double a);

/** Full CLT summary for the DM estimator and the naive variance estimator. */
AsymptoticReport dm_asymptotic_variance(const PlatformModel& m, double a);

}  // namespace abx
