#pragma once

#include <functional>
#include <string>
#include <vector>

#include "abx/model.hpp"

namespace abx {

enum class TauForm { Linear, Constant };

TauForm parse_tau_form(const std::string& s);
std::string to_string(TauForm f);

/** tau(k) = K * tau_bar(k / K) for the linear (tau_bar(x) = c x) or constant (tau_bar(x) = c) shape. */
std::vector<double> scaled_tau(int K, TauForm form, double tau_bar);

/**
 * Logit choice family. Customers value each of the K - k open listings at v_z
 * against an outside option eps_bar, with v1 = v0 + delta.
 * When outside_scales_with_K is set the outside option becomes K eps_bar.
 */
struct LogitParams {
  int K = 200;
  double lambda_bar = 1.5;
  TauForm tau_form = TauForm::Linear;
  double tau_bar = 1.0;
  double v0 = 0.5;
  double delta = 0.05;
  double eps_bar = 1.0;
  bool outside_scales_with_K = false;
};

PlatformModel logit_scenario(const LogitParams& params);

/** p-bar solving GTE = 0 for the sign-inconsistent null example, in extended precision. */
long double example_null_pbar(int K);

/**
 * Sign-inconsistent treatment with GTE = 0: p0 = 0.5, p1 = p-bar at k = 0, 1
 * and 0.1 above. lambda = 1 and tau(k) = tau_bar per the constant form by default.
 */
PlatformModel example_sign_inconsistent_null(int K, TauForm form = TauForm::Constant);

/** K = 30; p0 = 0.5, p1 = 0.62 at k = 0, 1 and 0.0745 above. */
PlatformModel example_sign_inconsistent_alt(TauForm form = TauForm::Constant);

/** Continuous limit profiles on [0, 1] for the mean-field family. */
struct MeanFieldLimits {
  std::function<double(double)> p0_bar;
  std::function<double(double)> p1_bar;
  std::function<double(double)> tau_bar;
  double lambda_bar = 1.0;
};

/** lambda = K lambda_bar, tau(k) = K tau_bar(k/K), p_z(k) = p_z_bar(k/K). Rejects limits with p0_bar >= p1_bar below 1 or p_bar(1) != 0. */
PlatformModel meanfield_family(const MeanFieldLimits& limits, int K);

/**
 * Mean-field limits p_z_bar(s) = v_z (1 - s) / (eps_bar + v_z (1 - s)).
 * These reproduce logit_scenario with outside_scales_with_K set; the unscaled
 * logit profile depends on K beyond k/K and has no such limit.
 */
MeanFieldLimits logit_limits(const LogitParams& params);

}  // namespace abx
