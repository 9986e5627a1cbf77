#pragma once

#include <string>
#include <vector>

#include "abx/model.hpp"

namespace abx {

/** Upper standard-normal quantile: P(W >= Phi_q) = q. */
double normal_quantile(double q);

/** P(W >= x) for standard normal W. */
double normal_upper_tail(double x);

/**
 * P(|T| > Phi_{alpha/2}) with T ~ Normal(sqrt(N) ADE / sqrt(naive), sigma_tilde / sqrt(naive)).
 * This is the false positive probability when GTE = 0 and the power otherwise.
 */
double naive_test_power(const PlatformModel& m, double a, double N, double alpha);

/** Power of the z-test built on an unbiased estimator whose variance attains the Cramer-Rao bound. */
double unbiased_test_power(const PlatformModel& m, double a, double N, double alpha);

enum class CurveMode { Fpp, Power, Fnp };

std::string to_string(CurveMode mode);

struct PowerRow {
  double N = 0.0;
  double naive = 0.0;
  double unbiased = 0.0;
};

struct PowerCurve {
  std::vector<PowerRow> rows;
  double alpha = 0.05;
  std::string scenario;
  CurveMode mode = CurveMode::Power;
};

/** Analytic rejection probabilities on an N grid. Fnp rows hold log10(1 - power). */
PowerCurve power_curves(const PlatformModel& m, double a, const std::vector<double>& N_grid, double alpha,
                        CurveMode mode, const std::string& scenario = "");

/** log10 false negative probability for both pipelines. */
PowerCurve fnp_curves(const PlatformModel& m, double a, const std::vector<double>& N_grid, double alpha,
                      const std::string& scenario = "");

/** n points log-spaced over [lo, hi]. */
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace abx
