#include "abx/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "abx/errors.hpp"

namespace abx {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_profile(const std::vector<double>& p, int K, const char* name) {
  if (p.size() != static_cast<size_t>(K + 1)) {
    std::ostringstream os;
    os << name << " must have K+1 = " << K + 1 << " entries, got " << p.size();
    throw ValidationError(os.str());
  }
  for (size_t k = 0; k < p.size(); ++k) {
    if (!std::isfinite(p[k]) || p[k] < 0.0 || p[k] > 1.0) {
      std::ostringstream os;
      os << name << "(" << k << ") = " << p[k] << " is not a probability";
      throw ValidationError(os.str());
    }
  }
  if (p.back() != 0.0) {
    std::ostringstream os;
    os << name << "(K) must be 0 when every listing is booked, got " << p.back();
    throw ValidationError(os.str());
  }
}

}  // namespace

std::string Arm::label() const {
  switch (kind) {
    case Kind::Control: return "control";
    case Kind::Treatment: return "treatment";
    case Kind::Experiment: return "experiment(" + std::to_string(a) + ")";
  }
  return "?";
}

Distribution::Distribution(std::vector<double> probs, double tol) : probs_(std::move(probs)) {
  if (probs_.empty()) throw ValidationError("distribution must be nonempty");
  double s = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0) throw ValidationError("distribution entries must be finite and nonnegative");
    s += p;
  }
  if (std::abs(s - 1.0) > tol) {
    std::ostringstream os;
    os << "distribution sums to " << s << ", not 1";
    throw ValidationError(os.str());
  }
}

Eigen::VectorXd Distribution::vec() const {
  return Eigen::Map<const Eigen::VectorXd>(probs_.data(), static_cast<Eigen::Index>(probs_.size()));
}

Distribution Distribution::point_mass(size_t n, size_t k) {
  std::vector<double> p(n, 0.0);
  p.at(k) = 1.0;
  return Distribution(std::move(p));
}

std::string to_string(SignClass c) {
  switch (c) {
    case SignClass::Identical: return "Identical";
    case SignClass::StrictlyPositive: return "StrictlyPositive";
    case SignClass::StrictlyNegative: return "StrictlyNegative";
    case SignClass::Positive: return "Positive";
    case SignClass::Negative: return "Negative";
    case SignClass::Inconsistent: return "Inconsistent";
  }
  return "?";
}

std::vector<std::string> validate(const PlatformModel& m, ValidationMode mode) {
  std::vector<std::string> warnings;
  if (m.K < 1) throw ValidationError("K must be a positive integer, got " + std::to_string(m.K));
  if (!std::isfinite(m.lambda) || m.lambda <= 0.0) throw ValidationError("lambda must be > 0");
  if (m.tau.size() != static_cast<size_t>(m.K)) {
    throw ValidationError("tau must have K = " + std::to_string(m.K) + " entries, got " + std::to_string(m.tau.size()));
  }
  for (int k = 1; k <= m.K; ++k) {
    double t = m.tau_at(k);
    if (!std::isfinite(t) || t <= 0.0) throw ValidationError("tau(" + std::to_string(k) + ") must be > 0");
    if (k > 1 && t < m.tau_at(k - 1)) {
      throw ValidationError("tau must be nondecreasing, but tau(" + std::to_string(k) + ") < tau(" + std::to_string(k - 1) + ")");
    }
  }
  check_profile(m.p0, m.K, "p0");
  check_profile(m.p1, m.K, "p1");

  for (const auto* pr : {&m.p0, &m.p1}) {
    const char* name = pr == &m.p0 ? "p0" : "p1";
    const auto& p = *pr;
    for (int k = 0; k < m.K; ++k) {
      std::string issue;
      if (p[k] <= 0.0) {
        issue = std::string(name) + "(" + std::to_string(k) + ") is not positive";
      } else if (k + 1 < m.K && !(p[k] > p[k + 1])) {
        issue = std::string(name) + " is not strictly decreasing at k=" + std::to_string(k);
      }
      if (issue.empty()) continue;
      if (mode == ValidationMode::Strict) throw ValidationError(issue + " (strict mode)");
      warnings.push_back(issue);
      break;
    }
  }
  return warnings;
}

PlatformModel aggregate_types(const std::vector<CustomerType>& control,
                              const std::vector<CustomerType>& treatment,
                              const std::vector<double>& tau) {
  if (control.empty() || treatment.empty()) throw ValidationError("each arm needs at least one customer type");
  const size_t n = control.front().booking.size();
  if (n < 2) throw ValidationError("booking profiles need at least two states");

  auto mix = [n](const std::vector<CustomerType>& types, double& total) {
    std::vector<double> p(n, 0.0);
    total = 0.0;
    for (const auto& t : types) {
      if (!(t.rate > 0.0) || !std::isfinite(t.rate)) throw ValidationError("customer type rate must be > 0");
      if (t.booking.size() != n) throw ValidationError("customer type booking profiles have mismatched lengths");
      total += t.rate;
    }
    for (const auto& t : types) {
      for (size_t k = 0; k < n; ++k) p[k] += t.rate * t.booking[k];
    }
    for (double& x : p) x /= total;
    return p;
  };

  double lam0 = 0.0, lam1 = 0.0;
  PlatformModel m;
  m.K = static_cast<int>(n) - 1;
  m.p0 = mix(control, lam0);
  m.p1 = mix(treatment, lam1);
  if (std::abs(lam0 - lam1) > 1e-12 * std::max(1.0, lam0)) {
    throw ValidationError("control and treatment types must have the same total arrival rate");
  }
  m.lambda = lam0;
  m.tau = tau;
  validate(m);
  return m;
}

std::vector<double> booking_profile(const PlatformModel& m, const Arm& arm) {
  switch (arm.kind) {
    case Arm::Kind::Control: return m.p0;
    case Arm::Kind::Treatment: return m.p1;
    case Arm::Kind::Experiment: {
      check_allocation(arm.a, true);
      std::vector<double> q(m.p0.size());
      for (size_t k = 0; k < q.size(); ++k) q[k] = (1.0 - arm.a) * m.p0[k] + arm.a * m.p1[k];
      return q;
    }
  }
  return {};
}

std::vector<double> log_steady_state(const PlatformModel& m, const Arm& arm) {
  const auto q = booking_profile(m, arm);
  std::vector<double> lw(static_cast<size_t>(m.K + 1), kNegInf);
  lw[0] = 0.0;
  for (int k = 1; k <= m.K; ++k) {
    double prev = lw[k - 1];
    double rate = m.lambda * q[k - 1];
    lw[k] = (prev == kNegInf || rate <= 0.0) ? kNegInf : prev + std::log(rate) - std::log(m.tau_at(k));
  }
  double mx = *std::max_element(lw.begin(), lw.end());
  double s = 0.0;
  for (double x : lw) s += (x == kNegInf) ? 0.0 : std::exp(x - mx);
  double lz = mx + std::log(s);
  for (double& x : lw) {
    if (x != kNegInf) x -= lz;
  }
  return lw;
}

Distribution steady_state(const PlatformModel& m, const Arm& arm) {
  const auto lp = log_steady_state(m, arm);
  std::vector<double> p(lp.size());
  double s = 0.0;
  for (size_t k = 0; k < lp.size(); ++k) {
    p[k] = lp[k] == kNegInf ? 0.0 : std::exp(lp[k]);
    s += p[k];
  }
  for (double& x : p) x /= s;
  return Distribution(std::move(p));
}

double booking_rate(const PlatformModel& m, const Arm& arm) {
  const auto pi = steady_state(m, arm);
  const auto q = booking_profile(m, arm);
  double r = 0.0;
  for (size_t k = 0; k < q.size(); ++k) r += pi[k] * q[k];
  return r;
}

double gte(const PlatformModel& m) {
  return booking_rate(m, Arm::treatment()) - booking_rate(m, Arm::control());
}

double ade(const PlatformModel& m, double a) {
  check_allocation(a, true);
  const auto pi = steady_state(m, Arm::experiment(a));
  double s = 0.0;
  for (size_t k = 0; k < pi.size(); ++k) s += pi[k] * (m.p1[k] - m.p0[k]);
  return s;
}

bool dominates(const Distribution& nu, const Distribution& mu, double tol) {
  if (nu.size() != mu.size()) throw ValidationError("dominance needs distributions of equal length");
  double tn = 0.0, tm = 0.0;
  bool strict = false;
  for (size_t i = nu.size(); i-- > 1;) {
    tn += nu[i];
    tm += mu[i];
    if (tn < tm - tol) return false;
    if (tn > tm + tol) strict = true;
  }
  return strict;
}

SignClass classify_sign(const PlatformModel& m, double tol) {
  bool up = false, down = false, weak_up = false, weak_down = false;
  for (size_t k = 0; k < m.p0.size(); ++k) {
    double d = m.p1[k] - m.p0[k];
    if (d > tol) up = true;
    else if (d < -tol) down = true;
    else if (d > 0.0) weak_up = true;
    else if (d < 0.0) weak_down = true;
  }
  if (up && down) return SignClass::Inconsistent;
  if (up) return SignClass::StrictlyPositive;
  if (down) return SignClass::StrictlyNegative;
  if (weak_up && weak_down) return SignClass::Inconsistent;
  if (weak_up) return SignClass::Positive;
  if (weak_down) return SignClass::Negative;
  return SignClass::Identical;
}

Eigen::MatrixXd generator_matrix(const PlatformModel& m, const Arm& arm) {
  const auto q = booking_profile(m, arm);
  const int n = m.K + 1;
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    if (k < m.K) Q(k, k + 1) = m.lambda * q[k];
    if (k > 0) Q(k, k - 1) = m.tau_at(k);
    Q(k, k) = -Q.row(k).sum();
  }
  return Q;
}

PlatformModel as_aa(PlatformModel m) {
  m.p1 = m.p0;
  return m;
}

void check_allocation(double a, bool allow_degenerate) {
  if (!std::isfinite(a) || a < 0.0 || a > 1.0 || (!allow_degenerate && (a == 0.0 || a == 1.0))) {
    std::ostringstream os;
    os << "allocation a = " << a << (allow_degenerate ? " must lie in [0,1]" : " must lie in (0,1)");
    throw ValidationError(os.str());
  }
}

}  // namespace abx
