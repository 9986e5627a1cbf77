#pragma once

// Independent reference computations used only by the tests.

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "abx/cramer_rao.hpp"
#include "abx/model.hpp"
#include "abx/simulator.hpp"

namespace abx::oracle {

/** pi from a dense solve of pi Q = 0 with the normalization row swapped in. */
std::vector<double> steady_state_by_solve(const PlatformModel& m, const Arm& arm);

/** sum_{j=0..J} P^j r, stopping once |P^j r| drops below tail_tol. */
Eigen::VectorXd truncated_power_sum(const Eigen::MatrixXd& P, const Eigen::VectorXd& r, double tail_tol,
                                    int max_terms = 1000000);

/** Stationary vector by power iteration on the left. */
Eigen::VectorXd stationary_by_power(const Eigen::MatrixXd& P, int iters = 200000, double tol = 1e-15);

/**
 * sum_{j>=2} of the signed covariance combination, summed term by term:
 * the joint law of (state, Y_1) is pushed forward one customer at a time.
 */
double cov_tail_truncated(const PlatformModel& m, double a, double tail_tol = 1e-15);

/** Max residuals of the four value-function recursions for one arm. */
struct RecursionResiduals {
  double full_state = 0.0;   // v(K,0) - v(K-1,0) = -lambda rho / tau(K)
  double interior = 0.0;     // k = 1..K-1
  double empty_state = 0.0;  // v(1,0) - v(0,0) = (rho - p(0)) / p(0)
  double booked = 0.0;       // v(k,1) = 1 + v(k+1,0)
  double max() const;
};

RecursionResiduals recursion_residuals(const PlatformModel& m, const ValueFunction& vf);

/** Random model with strictly decreasing p0 and p1 = p0 + positive lift (or minus when negative). */
PlatformModel random_signed_model(std::mt19937_64& rng, int K, bool negative = false);

/** Random model with arbitrary valid profiles (monotone tau). */
PlatformModel random_model(std::mt19937_64& rng, int K);

/** Random joint over {0,1}^N outcome vectors; symmetrized over permutations when exchangeable. */
JointOutcomes random_joint(std::mt19937_64& rng, int N, bool exchangeable);

}  // namespace abx::oracle
