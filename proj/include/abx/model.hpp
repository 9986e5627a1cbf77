#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace abx {

enum class ValidationMode { Permissive, Strict };

struct CustomerType {
  double rate = 0.0;
  std::vector<double> booking;  // p_gamma(0..K)
};

/**
 * Inventory-constrained platform with K listings.
 *
 * tau holds the holding (departure) rates tau(1..K); tau[k-1] is the total
 * departure rate when k listings are booked. p0 and p1 are the control and
 * treatment booking probabilities indexed by the number of booked listings.
 */
struct PlatformModel {
  int K = 0;
  double lambda = 0.0;
  std::vector<double> tau;
  std::vector<double> p0;
  std::vector<double> p1;

  // tau(k) with tau(0) = 0.
  double tau_at(int k) const { return k == 0 ? 0.0 : tau[static_cast<size_t>(k - 1)]; }
  int states() const { return K + 1; }
};

/** Which booking profile drives the chain. */
struct Arm {
  enum class Kind { Control, Treatment, Experiment };
  Kind kind = Kind::Control;
  double a = 0.0;

  static Arm control() { return {Kind::Control, 0.0}; }
  static Arm treatment() { return {Kind::Treatment, 1.0}; }
  static Arm experiment(double a) { return {Kind::Experiment, a}; }
  std::string label() const;
};

/** Probability vector over 0..K. Construction checks nonnegativity and unit mass. */
class Distribution {
 public:
  Distribution() = default;
  explicit Distribution(std::vector<double> probs, double tol = 1e-12);

  const std::vector<double>& probs() const { return probs_; }
  double operator[](size_t k) const { return probs_[k]; }
  size_t size() const { return probs_.size(); }
  Eigen::VectorXd vec() const;
  static Distribution point_mass(size_t n, size_t k);

 private:
  std::vector<double> probs_;
};

enum class SignClass { Identical, StrictlyPositive, StrictlyNegative, Positive, Negative, Inconsistent };

std::string to_string(SignClass c);

/**
 * Check the model invariants. Hard violations throw ValidationError.
 * Soft ones (booking probabilities that are not strictly decreasing) are
 * returned as warnings in permissive mode and thrown in strict mode.
 */
std::vector<std::string> validate(const PlatformModel& m, ValidationMode mode = ValidationMode::Permissive);

/** lambda = sum of rates, p_z = rate-weighted mean booking profile. */
PlatformModel aggregate_types(const std::vector<CustomerType>& control,
                              const std::vector<CustomerType>& treatment,
                              const std::vector<double>& tau);

/** Booking profile q for an arm: p0, p1 or (1-a)p0 + a p1. */
std::vector<double> booking_profile(const PlatformModel& m, const Arm& arm);

/** Unnormalized log weights sum_{j<=k} log(lambda q(j-1)/tau(j)), normalized to log pi. -inf marks unreachable states. */
std::vector<double> log_steady_state(const PlatformModel& m, const Arm& arm);

Distribution steady_state(const PlatformModel& m, const Arm& arm);

double booking_rate(const PlatformModel& m, const Arm& arm);

double gte(const PlatformModel& m);

double ade(const PlatformModel& m, double a);

/** Tail-sum dominance: every tail of nu >= the tail of mu, one strictly (tol on each comparison). */
bool dominates(const Distribution& nu, const Distribution& mu, double tol = 1e-12);

/**
 * Sign class of p1 - p0. Differences with magnitude <= tol count as ties;
 * tied but not bit-identical profiles come back as Positive or Negative.
 */
SignClass classify_sign(const PlatformModel& m, double tol = 0.0);

/** Continuous-time generator of the birth-death chain for an arm. */
Eigen::MatrixXd generator_matrix(const PlatformModel& m, const Arm& arm);

/** Model with p1 replaced by p0. */
PlatformModel as_aa(PlatformModel m);

void check_allocation(double a, bool allow_degenerate);

}  // namespace abx
