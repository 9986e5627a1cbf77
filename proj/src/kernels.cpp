#include "abx/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "abx/errors.hpp"

namespace abx {

Eigen::MatrixXd interarrival_kernel(const PlatformModel& m) {
  const int n = m.K + 1;
  const double lam = m.lambda;
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int row = 0; row < n; ++row) {
    double survive = 1.0;  // product of departure-wins factors above k'
    for (int k = row; k >= 0; --k) {
      double t = m.tau_at(k);
      D(row, k) = survive * lam / (lam + t);
      survive *= t / (lam + t);
    }
  }
  return D;
}

Eigen::MatrixXd seen_state_kernel(const PlatformModel& m, const Arm& arm) {
  const auto q = booking_profile(m, arm);
  const Eigen::MatrixXd D = interarrival_kernel(m);
  const int n = m.K + 1;
  Eigen::MatrixXd M(n, n);
  for (int k = 0; k < n; ++k) {
    int up = std::min(k + 1, m.K);
    M.row(k) = q[k] * D.row(up) + (1.0 - q[k]) * D.row(k);
  }
  return M;
}

AugmentedKernel augmented_kernel(const PlatformModel& m, const Arm& arm) {
  const auto q = booking_profile(m, arm);
  const auto lpi = log_steady_state(m, arm);
  const Eigen::MatrixXd D = interarrival_kernel(m);
  const int n = m.K + 1;
  AugmentedKernel A;
  A.P = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  A.phi = Eigen::VectorXd::Zero(2 * n);
  A.log_phi.assign(static_cast<size_t>(2 * n), -std::numeric_limits<double>::infinity());
  for (int k = 0; k < n; ++k) {
    for (int y = 0; y < 2; ++y) {
      int from = std::min(k + y, m.K);
      for (int kp = 0; kp < n; ++kp) {
        double d = D(from, kp);
        A.P(aug_index(k, y), aug_index(kp, 0)) = d * (1.0 - q[kp]);
        A.P(aug_index(k, y), aug_index(kp, 1)) = d * q[kp];
      }
    }
    double w0 = 1.0 - q[k], w1 = q[k];
    if (std::isfinite(lpi[k])) {
      if (w0 > 0.0) A.log_phi[aug_index(k, 0)] = lpi[k] + std::log(w0);
      if (w1 > 0.0) A.log_phi[aug_index(k, 1)] = lpi[k] + std::log(w1);
    }
  }
  for (int s = 0; s < 2 * n; ++s) {
    A.phi(s) = std::isfinite(A.log_phi[s]) ? std::exp(A.log_phi[s]) : 0.0;
  }
  return A;
}

std::vector<Distribution> propagate_arrival_distributions(const PlatformModel& m, const std::vector<int>& Z,
                                                          const Distribution& nu1) {
  if (Z.empty()) throw ValidationError("assignment sequence must be nonempty");
  if (nu1.size() != static_cast<size_t>(m.K + 1)) throw ValidationError("initial distribution has the wrong length");
  const Eigen::MatrixXd M0 = seen_state_kernel(m, Arm::control());
  const Eigen::MatrixXd M1 = seen_state_kernel(m, Arm::treatment());
  std::vector<Distribution> out;
  out.reserve(Z.size());
  out.push_back(nu1);
  Eigen::RowVectorXd nu = nu1.vec().transpose();
  for (size_t i = 0; i + 1 < Z.size(); ++i) {
    if (Z[i] != 0 && Z[i] != 1) throw ValidationError("assignments must be 0 or 1");
    nu = nu * (Z[i] ? M1 : M0);
    nu = nu.cwiseMax(0.0);
    nu /= nu.sum();
    out.emplace_back(std::vector<double>(nu.data(), nu.data() + nu.size()));
  }
  if (Z.back() != 0 && Z.back() != 1) throw ValidationError("assignments must be 0 or 1");
  return out;
}

double row_sum_error(const Eigen::MatrixXd& P) {
  return (P.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

}  // namespace abx
