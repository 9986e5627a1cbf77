#pragma once

#include <vector>

#include <Eigen/Dense>

#include "abx/model.hpp"

namespace abx {

/**
 * D(m, k'): probability that a chain holding m bookings right after an
 * arrival has k' bookings when the next customer arrives.
 */
Eigen::MatrixXd interarrival_kernel(const PlatformModel& m);

/** Transition of the state seen by successive customers under the arm's booking profile. */
Eigen::MatrixXd seen_state_kernel(const PlatformModel& m, const Arm& arm);

/** Chain on (k, y) pairs; index 2k + y. The arm sets the booking outcome of the arriving customer. */
struct AugmentedKernel {
  Eigen::MatrixXd P;
  Eigen::VectorXd phi;  // stationary law pi(k) q(k)^y (1-q(k))^(1-y)
  std::vector<double> log_phi;
};

inline int aug_index(int k, int y) { return 2 * k + y; }

AugmentedKernel augmented_kernel(const PlatformModel& m, const Arm& arm);

/**
 * Exact law of the state seen by each of N customers given the assignment
 * vector Z, starting from nu1. Returns nu_1..nu_N.
 */
std::vector<Distribution> propagate_arrival_distributions(const PlatformModel& m, const std::vector<int>& Z,
                                                          const Distribution& nu1);

/** Max over rows of |row sum - 1|. */
double row_sum_error(const Eigen::MatrixXd& P);

}  // namespace abx
