#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <json.hpp>

#include "abx/model.hpp"

namespace abx {

struct InitialState {
  enum class Kind { ControlSteadyState, TreatmentSteadyState, Fixed, Custom };
  Kind kind = Kind::ControlSteadyState;
  int k = 0;            // Fixed
  Distribution custom;  // Custom

  static InitialState control() { return {}; }
  static InitialState treatment() { return {Kind::TreatmentSteadyState, 0, {}}; }
  static InitialState fixed(int k) { return {Kind::Fixed, k, {}}; }
  static InitialState from(Distribution d) { return {Kind::Custom, 0, std::move(d)}; }
};

struct SimConfig {
  PlatformModel model;
  double a = 0.5;
  long N = 1000;
  long R = 1;
  std::uint64_t seed = 1;
  InitialState initial;
  double alpha = 0.05;
};

void validate(const SimConfig& c);

struct TrajectoryOutcome {
  double gte_hat = 0.0;  // NaN when an arm is empty
  double var_hat = 0.0;  // NaN when an arm has fewer than two customers
  double t_stat = 0.0;   // NaN when degenerate or 0/0
  long n1 = 0;
  long n0 = 0;
  bool rejected = false;
  bool degenerate = false;
};

/** Per-customer record, kept only on request. */
struct CustomerRecord {
  int state = 0;  // bookings seen on arrival
  int z = 0;
  int y = 0;
};

using Rng = std::mt19937_64;

/** Independent stream for replication rep of a run seeded with seed. */
Rng replication_stream(std::uint64_t seed, std::uint64_t rep);

/**
 * One experiment of N customers: Bernoulli(a) assignment, Bernoulli(p_z(k))
 * booking, then departures raced against the next arrival.
 */
TrajectoryOutcome simulate_trajectory(const SimConfig& c, Rng& rng, std::vector<CustomerRecord>* records = nullptr);

/** DM statistics from finished (z, y) data. */
TrajectoryOutcome summarize_outcomes(const std::vector<int>& z, const std::vector<double>& y, double alpha);

struct ReplicationSummary {
  long R = 0;
  double reject_rate = 0.0;
  double reject_se = 0.0;
  double mean_gte_hat = 0.0;  // over replications with both arms nonempty
  double gte_hat_se = 0.0;
  double gte_hat_var = 0.0;   // sample variance of gte_hat
  long gte_count = 0;
  long degenerate_count = 0;
  std::vector<TrajectoryOutcome> outcomes;  // index-ordered
};

/** R replications on independent streams; results do not depend on the thread count. */
ReplicationSummary run_replications(const SimConfig& c);

nlohmann::json to_json(const ReplicationSummary& s, const SimConfig& c);

struct ExactMoments {
  double mean_gte = 0.0;  // E[GTE_hat | N1 > 0, N0 > 0]
  double mean_var = 0.0;  // E[Var_hat | N1 > 1, N0 > 1]
  double var_gte = 0.0;   // Var(GTE_hat | N1 > 1, N0 > 1)
};

struct OracleResult {
  ExactMoments original;
  ExactMoments permuted;  // same moments with outcomes uniformly permuted
};

/** Outcome vectors with probabilities; every vector has the same length N <= 6. */
struct JointOutcomes {
  std::vector<std::vector<double>> support;
  std::vector<double> prob;
};

/** Exact moments by enumerating every assignment vector and support point. */
OracleResult exchangeable_oracle(const JointOutcomes& joint, double a);

}  // namespace abx
