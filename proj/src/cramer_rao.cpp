#include "abx/cramer_rao.hpp"

#include <cmath>
#include <sstream>

#include "abx/asymptotics.hpp"
#include "abx/errors.hpp"
#include "abx/kernels.hpp"
#include "abx/parallel.hpp"

namespace abx {

namespace {

Arm global_arm(int z) {
  if (z != 0 && z != 1) throw ValidationError("arm index must be 0 or 1");
  return z ? Arm::treatment() : Arm::control();
}

Eigen::VectorXd outcome_reward(int states) {
  Eigen::VectorXd g(2 * states);
  for (int s = 0; s < 2 * states; ++s) g(s) = s % 2;
  return g;
}

ValueFunction solve_poisson(const AugmentedKernel& A, int z, const Eigen::VectorXd& g) {
  ValueFunction vf;
  vf.z = z;
  vf.rho = A.phi.dot(g);
  Eigen::VectorXd rhs = g.array() - vf.rho;
  rhs.array() -= A.phi.dot(rhs);
  vf.v = fundamental_solve(A.P, A.phi, rhs);
  vf.poisson_residual = (vf.v - rhs - A.P * vf.v).cwiseAbs().maxCoeff();
  return vf;
}

struct Kahan {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

ValueFunction value_function(const PlatformModel& m, int z) {
  return value_function(m, z, outcome_reward(m.K + 1));
}

ValueFunction value_function(const PlatformModel& m, int z, const Eigen::VectorXd& reward) {
  if (reward.size() != 2 * (m.K + 1)) throw ValidationError("reward must cover all 2(K+1) augmented states");
  return solve_poisson(augmented_kernel(m, global_arm(z)), z, reward);
}

CRBound cr_lower_bound(const PlatformModel& m, double a) {
  check_allocation(a, false);
  const int n = 2 * (m.K + 1);
  const Eigen::VectorXd g = outcome_reward(m.K + 1);
  const AugmentedKernel exp_chain = augmented_kernel(m, Arm::experiment(a));

  CRBound out;
  out.K = m.K;
  for (int z = 0; z < 2; ++z) {
    const AugmentedKernel A = augmented_kernel(m, global_arm(z));
    const ValueFunction vf = solve_poisson(A, z, g);
    Kahan acc;
    for (int x = 0; x < n; ++x) {
      double lphi = A.log_phi[x];
      if (!std::isfinite(lphi)) continue;
      double lphia = exp_chain.log_phi[x];
      if (!std::isfinite(lphia)) {
        std::ostringstream os;
        os << "experiment chain never visits augmented state " << x << " that arm " << z
           << " visits; the experiment chain is reducible";
        throw NumericalError(os.str());
      }
      double weight = std::exp(2.0 * lphi - lphia);
      double inner = 0.0;
      double shift = -vf.v(x) + g(x) - vf.rho;
      for (int xp = 0; xp < n; ++xp) {
        double p = A.P(x, xp);
        if (p == 0.0) continue;
        double d = vf.v(xp) + shift;
        inner += p * d * d;
      }
      acc.add(weight * inner);
    }
    if (z == 1) out.treatment_part = acc.sum / a;
    else out.control_part = acc.sum / (1.0 - a);
  }
  out.sigma_ub_sq = out.treatment_part + out.control_part;
  if (!std::isfinite(out.sigma_ub_sq) || out.sigma_ub_sq < 0.0) throw NumericalError("Cramer-Rao bound is not finite");
  return out;
}

void linear_fit(const std::vector<double>& x, const std::vector<double>& y, double& slope, double& intercept,
                double& r2) {
  const size_t n = x.size();
  if (n < 2 || y.size() != n) throw ValidationError("linear fit needs at least two matching points");
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("linear fit needs distinct x values");
  slope = sxy / sxx;
  intercept = my - slope * mx;
  r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
}

GrowthScan growth_scan(const ModelFamily& family, const std::vector<int>& K_list, double a) {
  check_allocation(a, false);
  if (K_list.empty()) throw ValidationError("growth scan needs at least one K");
  GrowthScan scan;
  scan.rows.resize(K_list.size());
  parallel_for(K_list.size(), [&](size_t i) {
    PlatformModel m = family(K_list[i]);
    scan.rows[i] = {K_list[i], cr_lower_bound(m, a).sigma_ub_sq,
                    centered_variance(m, a, 1) / a + centered_variance(m, a, 0) / (1.0 - a)};
  });
  if (scan.rows.size() >= 2) {
    std::vector<double> xs, ys;
    for (const auto& r : scan.rows) {
      xs.push_back(r.K);
      ys.push_back(std::log(r.sigma_ub_sq));
    }
    linear_fit(xs, ys, scan.slope, scan.intercept, scan.r2);
    scan.has_fit = true;
  }
  return scan;
}

}  // namespace abx
