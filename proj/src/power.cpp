#include "abx/power.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "abx/asymptotics.hpp"
#include "abx/cramer_rao.hpp"
#include "abx/errors.hpp"

namespace abx {

namespace {

// Lower-tail inverse normal CDF, Acklam's rational approximation (relative error ~1e-9).
double acklam_lower(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                             1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                             6.680131188771972e+01, -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                             -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                             3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    double q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > 1 - plow) {
    double q = std::sqrt(-2 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  double q = p - 0.5;
  double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0,1)");
}

// log P(W >= x); the asymptotic series takes over where erfc underflows.
double log_upper_tail(double x) {
  if (x < 30.0) return std::log(normal_upper_tail(x));
  double r = 1.0 / (x * x), term = 1.0, series = 1.0;
  for (int n = 1; n <= 8; ++n) {
    term *= -(2 * n - 1) * r;
    series += term;
  }
  return -0.5 * x * x - std::log(x) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

// Rejection probability and log10 of its complement for T ~ Normal(mu, sd) and threshold c.
struct TwoSided {
  double reject;
  double log10_accept;
};

TwoSided two_sided(double mu, double sd, double c) {
  double m = std::abs(mu);
  TwoSided t;
  t.reject = normal_upper_tail((c - m) / sd) + normal_upper_tail((c + m) / sd);
  // acceptance = Q((m-c)/sd) - Q((m+c)/sd), kept in logs so deep tails stay finite
  double la = log_upper_tail((m - c) / sd), lb = log_upper_tail((m + c) / sd);
  t.log10_accept = (la + std::log1p(-std::exp(lb - la))) / std::numbers::ln10;
  return t;
}

TwoSided naive_two_sided(const AsymptoticReport& r, double N, double c) {
  if (!(r.naive_limit > 0.0)) throw NumericalError("naive variance limit is zero; the t statistic is undefined");
  double mu = std::sqrt(N) * r.ade / std::sqrt(r.naive_limit);
  double sd = std::sqrt(r.sigma_tilde_sq / r.naive_limit);
  return two_sided(mu, sd, c);
}

TwoSided unbiased_two_sided(double gte_value, double sigma_ub_sq, double N, double c) {
  if (gte_value == 0.0) return two_sided(0.0, 1.0, c);
  if (!(sigma_ub_sq > 0.0)) throw NumericalError("Cramer-Rao bound is zero for a nonzero effect");
  return two_sided(std::sqrt(N) * gte_value / std::sqrt(sigma_ub_sq), 1.0, c);
}

void check_N(double N) {
  if (!(N >= 1.0) || !std::isfinite(N)) throw ValidationError("N must be >= 1");
}

}  // namespace

double normal_upper_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double normal_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    std::ostringstream os;
    os << "quantile level " << q << " must lie in (0,1)";
    throw ValidationError(os.str());
  }
  if (q == 0.5) return 0.0;
  double x = -acklam_lower(q);
  double pdf = normal_pdf(x);
  if (pdf > 0.0) x += (normal_upper_tail(x) - q) / pdf;
  return x;
}

double naive_test_power(const PlatformModel& m, double a, double N, double alpha) {
  check_alpha(alpha);
  check_N(N);
  return naive_two_sided(dm_asymptotic_variance(m, a), N, normal_quantile(alpha / 2)).reject;
}

double unbiased_test_power(const PlatformModel& m, double a, double N, double alpha) {
  check_alpha(alpha);
  check_N(N);
  double g = gte(m);
  double s2 = g == 0.0 ? 0.0 : cr_lower_bound(m, a).sigma_ub_sq;
  return unbiased_two_sided(g, s2, N, normal_quantile(alpha / 2)).reject;
}

std::string to_string(CurveMode mode) {
  switch (mode) {
    case CurveMode::Fpp: return "fpp";
    case CurveMode::Power: return "power";
    case CurveMode::Fnp: return "log10_fnp";
  }
  return "?";
}

PowerCurve power_curves(const PlatformModel& m, double a, const std::vector<double>& N_grid, double alpha,
                        CurveMode mode, const std::string& scenario) {
  check_alpha(alpha);
  if (N_grid.empty()) throw ValidationError("N grid must be nonempty");
  for (size_t i = 0; i < N_grid.size(); ++i) {
    check_N(N_grid[i]);
    if (i > 0 && !(N_grid[i] > N_grid[i - 1])) throw ValidationError("N grid must be increasing");
  }
  const AsymptoticReport rep = dm_asymptotic_variance(m, a);
  const double s2 = rep.gte == 0.0 ? 0.0 : cr_lower_bound(m, a).sigma_ub_sq;
  const double c = normal_quantile(alpha / 2);

  PowerCurve curve;
  curve.alpha = alpha;
  curve.scenario = scenario;
  curve.mode = mode;
  for (double N : N_grid) {
    TwoSided nv = naive_two_sided(rep, N, c);
    TwoSided ub = unbiased_two_sided(rep.gte, s2, N, c);
    PowerRow row{N, nv.reject, ub.reject};
    if (mode == CurveMode::Fnp) {
      row.naive = nv.log10_accept;
      row.unbiased = ub.log10_accept;
    }
    curve.rows.push_back(row);
  }
  return curve;
}

PowerCurve fnp_curves(const PlatformModel& m, double a, const std::vector<double>& N_grid, double alpha,
                      const std::string& scenario) {
  return power_curves(m, a, N_grid, alpha, CurveMode::Fnp, scenario);
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (n < 1 || !(lo > 0.0) || !(hi >= lo)) throw ValidationError("log grid needs n >= 1 and 0 < lo <= hi");
  std::vector<double> g(static_cast<size_t>(n));
  if (n == 1) {
    g[0] = lo;
    return g;
  }
  double l0 = std::log10(lo), l1 = std::log10(hi);
  for (int i = 0; i < n; ++i) g[i] = std::pow(10.0, l0 + (l1 - l0) * i / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

}  // namespace abx
