#include "abx/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "abx/errors.hpp"
#include "abx/kernels.hpp"

namespace abx {

nlohmann::json to_json(const AsymptoticReport& r) {
  return nlohmann::json{{"gte", r.gte},
                        {"ade", r.ade},
                        {"v0", r.v0},
                        {"v1", r.v1},
                        {"cov_tail", r.cov_tail},
                        {"sigma_tilde_sq", r.sigma_tilde_sq},
                        {"naive_limit", r.naive_limit},
                        {"a", r.a}};
}

double centered_variance(const PlatformModel& m, double a, int z) {
  check_allocation(a, false);
  if (z != 0 && z != 1) throw ValidationError("arm index must be 0 or 1");
  const auto pi = steady_state(m, Arm::experiment(a));
  const auto& p = z ? m.p1 : m.p0;
  double mz = 0.0;
  for (size_t k = 0; k < p.size(); ++k) mz += pi[k] * p[k];
  double v = 0.0;
  for (size_t k = 0; k < p.size(); ++k) {
    v += pi[k] * (p[k] * (1.0 - mz) * (1.0 - mz) + (1.0 - p[k]) * mz * mz);
  }
  return v;
}

Eigen::VectorXd fundamental_solve(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& stationary,
                                  const Eigen::VectorXd& rhs) {
  const Eigen::Index n = kernel.rows();
  if (kernel.cols() != n || stationary.size() != n || rhs.size() != n) {
    throw ValidationError("fundamental_solve: dimension mismatch");
  }
  double inv_err = (stationary.transpose() * kernel - stationary.transpose()).cwiseAbs().maxCoeff();
  if (inv_err > 1e-8) {
    std::ostringstream os;
    os << "stationary vector is not invariant for the kernel (error " << inv_err << ")";
    throw NumericalError(os.str());
  }
  double centering = stationary.dot(rhs);
  if (std::abs(centering) > 1e-10) {
    std::ostringstream os;
    os << "right-hand side is not centered under the stationary law (mean " << centering << ")";
    throw NumericalError(os.str());
  }
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - kernel;
  A.rowwise() += stationary.transpose();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  double rc = lu.rcond();
  if (!(rc > 0.0) || !std::isfinite(rc)) throw NumericalError("fundamental matrix is singular (non-ergodic kernel)");
  if (1.0 / rc > 1e12) {
    std::ostringstream os;
    os << "fundamental matrix is ill-conditioned (condition estimate " << 1.0 / rc << ")";
    warn(os.str());
  }
  Eigen::VectorXd x = lu.solve(rhs);
  double res = (A * x - rhs).cwiseAbs().maxCoeff();
  double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  if (!std::isfinite(res) || res > 1e-9 * scale) {
    std::ostringstream os;
    os << "fundamental solve residual " << res << " exceeds tolerance";
    throw NumericalError(os.str());
  }
  return x;
}

double cov_tail_sum(const PlatformModel& m, double a) {
  check_allocation(a, false);
  const int n = m.K + 1;
  const Arm arm = Arm::experiment(a);
  const Eigen::VectorXd pia = steady_state(m, arm).vec();
  const Eigen::MatrixXd D = interarrival_kernel(m);
  const Eigen::MatrixXd Ma = seen_state_kernel(m, arm);

  const std::vector<double>* prof[2] = {&m.p0, &m.p1};
  double mean[2];
  for (int z = 0; z < 2; ++z) {
    mean[z] = 0.0;
    for (int k = 0; k < n; ++k) mean[z] += pia(k) * (*prof[z])[k];
  }

  Eigen::VectorXd solved[2];
  for (int z = 0; z < 2; ++z) {
    Eigen::VectorXd r(n);
    for (int k = 0; k < n; ++k) r(k) = (*prof[z])[k] - mean[z];
    r.array() -= pia.dot(r);  // strip rounding drift before the centering check
    solved[z] = fundamental_solve(Ma, pia, r);
  }

  double total = 0.0;
  for (int z = 0; z < 2; ++z) {
    const auto& p = *prof[z];
    Eigen::RowVectorXd w = Eigen::RowVectorXd::Zero(n);
    for (int k = 0; k < n; ++k) {
      int up = std::min(k + 1, m.K);
      w += pia(k) * p[k] * (1.0 - mean[z]) * D.row(up);
      w -= pia(k) * (1.0 - p[k]) * mean[z] * D.row(k);
    }
    for (int zp = 0; zp < 2; ++zp) {
      double c = w.dot(solved[zp]);
      total += (z == zp) ? c : -c;
    }
  }
  return total;
}

AsymptoticReport dm_asymptotic_variance(const PlatformModel& m, double a) {
  check_allocation(a, false);
  AsymptoticReport r;
  r.warnings = validate(m);
  r.a = a;
  r.gte = gte(m);
  r.ade = ade(m, a);
  r.v0 = centered_variance(m, a, 0);
  r.v1 = centered_variance(m, a, 1);
  r.naive_limit = r.v1 / a + r.v0 / (1.0 - a);
  r.cov_tail = cov_tail_sum(m, a);
  r.sigma_tilde_sq = r.v0 / (1.0 - a) + r.v1 / a + 2.0 * r.cov_tail;
  if (!(r.sigma_tilde_sq > 0.0) || !std::isfinite(r.sigma_tilde_sq)) {
    std::ostringstream os;
    os << "asymptotic variance of the DM estimator is not positive (" << r.sigma_tilde_sq << ")";
    throw NumericalError(os.str());
  }
  return r;
}

}  // namespace abx
