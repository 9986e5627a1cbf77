#include "abx/scenarios.hpp"

#include <cmath>
#include <sstream>

#include "abx/errors.hpp"

namespace abx {

TauForm parse_tau_form(const std::string& s) {
  if (s == "linear") return TauForm::Linear;
  if (s == "constant") return TauForm::Constant;
  throw ValidationError("tau form must be linear or constant, got " + s);
}

std::string to_string(TauForm f) { return f == TauForm::Linear ? "linear" : "constant"; }

std::vector<double> scaled_tau(int K, TauForm form, double tau_bar) {
  if (K < 1) throw ValidationError("K must be a positive integer");
  if (!(tau_bar > 0.0)) throw ValidationError("tau_bar must be > 0");
  std::vector<double> tau(static_cast<size_t>(K));
  for (int k = 1; k <= K; ++k) tau[k - 1] = form == TauForm::Linear ? k * tau_bar : K * tau_bar;
  return tau;
}

PlatformModel logit_scenario(const LogitParams& p) {
  if (p.K < 1) throw ValidationError("K must be a positive integer");
  if (!(p.lambda_bar > 0.0) || !(p.tau_bar > 0.0) || !(p.v0 > 0.0) || !(p.eps_bar > 0.0) || !(p.delta >= 0.0)) {
    throw ValidationError("logit parameters must be positive (delta >= 0)");
  }
  PlatformModel m;
  m.K = p.K;
  m.lambda = p.K * p.lambda_bar;
  m.tau = scaled_tau(p.K, p.tau_form, p.tau_bar);
  const double eps = p.outside_scales_with_K ? p.K * p.eps_bar : p.eps_bar;
  const double v1 = p.v0 + p.delta;
  m.p0.resize(static_cast<size_t>(p.K + 1));
  m.p1.resize(static_cast<size_t>(p.K + 1));
  for (int k = 0; k <= p.K; ++k) {
    double open = p.K - k;
    m.p0[k] = open * p.v0 / (eps + open * p.v0);
    m.p1[k] = open * v1 / (eps + open * v1);
  }
  validate(m, ValidationMode::Strict);
  return m;
}

long double example_null_pbar(int K) {
  if (K < 3) throw ValidationError("the null example needs K >= 3");
  const long double A = (1.0L - std::pow(0.1L, K - 1)) / 0.9L;
  const long double B = (1.0L - std::pow(0.5L, K + 1)) / 0.5L;
  return (-1.0L + std::sqrt(1.0L + 4.0L * A * (B - 1.0L))) / (2.0L * A);
}

namespace {

PlatformModel two_level_example(int K, double head, double tail, TauForm form) {
  PlatformModel m;
  m.K = K;
  m.lambda = 1.0;
  m.tau = form == TauForm::Constant ? std::vector<double>(static_cast<size_t>(K), 1.0) : scaled_tau(K, form, 1.0);
  m.p0.assign(static_cast<size_t>(K + 1), 0.5);
  m.p0[K] = 0.0;
  m.p1.assign(static_cast<size_t>(K + 1), tail);
  m.p1[0] = m.p1[1] = head;
  m.p1[K] = 0.0;
  validate(m, ValidationMode::Permissive);
  return m;
}

}  // namespace

PlatformModel example_sign_inconsistent_null(int K, TauForm form) {
  return two_level_example(K, static_cast<double>(example_null_pbar(K)), 0.1, form);
}

PlatformModel example_sign_inconsistent_alt(TauForm form) { return two_level_example(30, 0.62, 0.0745, form); }

PlatformModel meanfield_family(const MeanFieldLimits& L, int K) {
  if (K < 1) throw ValidationError("K must be a positive integer");
  if (!L.p0_bar || !L.p1_bar || !L.tau_bar) throw ValidationError("mean-field limits must all be set");
  if (!(L.lambda_bar > 0.0)) throw ValidationError("lambda_bar must be > 0");
  PlatformModel m;
  m.K = K;
  m.lambda = K * L.lambda_bar;
  m.tau.resize(static_cast<size_t>(K));
  m.p0.resize(static_cast<size_t>(K + 1));
  m.p1.resize(static_cast<size_t>(K + 1));
  for (int k = 0; k <= K; ++k) {
    double s = static_cast<double>(k) / K;
    m.p0[k] = L.p0_bar(s);
    m.p1[k] = L.p1_bar(s);
    if (k > 0) m.tau[k - 1] = K * L.tau_bar(s);
    if (k < K && !(m.p0[k] < m.p1[k])) {
      std::ostringstream os;
      os << "mean-field limits need p0_bar < p1_bar on [0,1); fails at s = " << s;
      throw ValidationError(os.str());
    }
  }
  if (m.p0[K] != 0.0 || m.p1[K] != 0.0) throw ValidationError("mean-field limits need p_bar(1) = 0");
  validate(m, ValidationMode::Strict);
  return m;
}

MeanFieldLimits logit_limits(const LogitParams& p) {
  MeanFieldLimits L;
  const double v0 = p.v0, v1 = p.v0 + p.delta, e = p.eps_bar, tb = p.tau_bar;
  L.p0_bar = [v0, e](double s) { return (1 - s) * v0 / (e + (1 - s) * v0); };
  L.p1_bar = [v1, e](double s) { return (1 - s) * v1 / (e + (1 - s) * v1); };
  if (p.tau_form == TauForm::Linear) L.tau_bar = [tb](double s) { return tb * s; };
  else L.tau_bar = [tb](double) { return tb; };
  L.lambda_bar = p.lambda_bar;
  return L;
}

}  // namespace abx
