#include "abx/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "abx/errors.hpp"
#include "abx/parallel.hpp"
#include "abx/power.hpp"

namespace abx {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<double> initial_cdf(const SimConfig& c) {
  std::vector<double> p;
  switch (c.initial.kind) {
    case InitialState::Kind::ControlSteadyState: p = steady_state(c.model, Arm::control()).probs(); break;
    case InitialState::Kind::TreatmentSteadyState: p = steady_state(c.model, Arm::treatment()).probs(); break;
    case InitialState::Kind::Custom: p = c.initial.custom.probs(); break;
    case InitialState::Kind::Fixed:
      p.assign(static_cast<size_t>(c.model.K + 1), 0.0);
      p[static_cast<size_t>(c.initial.k)] = 1.0;
      break;
  }
  std::partial_sum(p.begin(), p.end(), p.begin());
  p.back() = 1.0;
  return p;
}

// Everything a trajectory needs that does not change between replications.
struct Prepared {
  std::vector<double> cdf;
  std::vector<double> depart;  // tau(k) / (lambda + tau(k))
  double threshold;
};

Prepared prepare(const SimConfig& c) {
  Prepared p;
  p.cdf = initial_cdf(c);
  p.depart.resize(static_cast<size_t>(c.model.K + 1));
  for (int k = 0; k <= c.model.K; ++k) {
    double t = c.model.tau_at(k);
    p.depart[k] = t / (c.model.lambda + t);
  }
  p.threshold = normal_quantile(c.alpha / 2);
  return p;
}

TrajectoryOutcome run_one(const SimConfig& c, const Prepared& prep, Rng& rng, std::vector<CustomerRecord>* records) {
  const auto& m = c.model;
  double u = uniform01(rng);
  int k = static_cast<int>(std::upper_bound(prep.cdf.begin(), prep.cdf.end(), u) - prep.cdf.begin());
  k = std::min(k, m.K);

  long n1 = 0, n0 = 0;
  double s1 = 0.0, s0 = 0.0;  // outcomes are 0/1, so sums of squares equal sums
  if (records) records->clear();
  for (long i = 0; i < c.N; ++i) {
    int z = uniform01(rng) < c.a ? 1 : 0;
    double p = z ? m.p1[k] : m.p0[k];
    int y = uniform01(rng) < p ? 1 : 0;
    if (records) records->push_back({k, z, y});
    if (z) {
      ++n1;
      s1 += y;
    } else {
      ++n0;
      s0 += y;
    }
    k += y;
    while (k > 0 && uniform01(rng) < prep.depart[k]) --k;
  }

  TrajectoryOutcome o;
  o.n1 = n1;
  o.n0 = n0;
  o.degenerate = n1 <= 1 || n0 <= 1;
  o.gte_hat = (n1 > 0 && n0 > 0) ? s1 / n1 - s0 / n0 : kNaN;
  if (o.degenerate) {
    o.var_hat = kNaN;
    o.t_stat = kNaN;
    return o;
  }
  double m1 = s1 / n1, m0 = s0 / n0;
  double ss1 = s1 - n1 * m1 * m1, ss0 = s0 - n0 * m0 * m0;
  o.var_hat = std::max(0.0, ss1) / (double(n1) * (n1 - 1)) + std::max(0.0, ss0) / (double(n0) * (n0 - 1));
  o.t_stat = o.gte_hat / std::sqrt(o.var_hat);
  o.rejected = std::abs(o.t_stat) > prep.threshold;  // false for NaN
  return o;
}

}  // namespace

void validate(const SimConfig& c) {
  validate(c.model);
  check_allocation(c.a, false);
  if (c.N < 2) throw ValidationError("N must be at least 2");
  if (c.R < 1) throw ValidationError("R must be at least 1");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ValidationError("alpha must lie in (0,1)");
  if (c.initial.kind == InitialState::Kind::Fixed && (c.initial.k < 0 || c.initial.k > c.model.K)) {
    throw ValidationError("fixed initial state must lie in 0..K");
  }
  if (c.initial.kind == InitialState::Kind::Custom && c.initial.custom.size() != static_cast<size_t>(c.model.K + 1)) {
    throw ValidationError("custom initial distribution must have K+1 entries");
  }
}

Rng replication_stream(std::uint64_t seed, std::uint64_t rep) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(rep), static_cast<std::uint32_t>(rep >> 32)};
  return Rng(seq);
}

TrajectoryOutcome simulate_trajectory(const SimConfig& c, Rng& rng, std::vector<CustomerRecord>* records) {
  validate(c);
  return run_one(c, prepare(c), rng, records);
}

TrajectoryOutcome summarize_outcomes(const std::vector<int>& z, const std::vector<double>& y, double alpha) {
  if (z.size() != y.size()) throw ValidationError("assignment and outcome vectors differ in length");
  long n1 = 0, n0 = 0;
  double s1 = 0.0, s0 = 0.0;
  for (size_t i = 0; i < z.size(); ++i) {
    if (z[i]) {
      ++n1;
      s1 += y[i];
    } else {
      ++n0;
      s0 += y[i];
    }
  }
  TrajectoryOutcome o;
  o.n1 = n1;
  o.n0 = n0;
  o.degenerate = n1 <= 1 || n0 <= 1;
  double m1 = n1 ? s1 / n1 : kNaN, m0 = n0 ? s0 / n0 : kNaN;
  o.gte_hat = (n1 > 0 && n0 > 0) ? m1 - m0 : kNaN;
  if (o.degenerate) {
    o.var_hat = kNaN;
    o.t_stat = kNaN;
    return o;
  }
  double q1 = 0.0, q0 = 0.0;
  for (size_t i = 0; i < z.size(); ++i) {
    if (z[i]) q1 += (y[i] - m1) * (y[i] - m1);
    else q0 += (y[i] - m0) * (y[i] - m0);
  }
  o.var_hat = q1 / (double(n1) * (n1 - 1)) + q0 / (double(n0) * (n0 - 1));
  o.t_stat = o.gte_hat / std::sqrt(o.var_hat);
  o.rejected = std::abs(o.t_stat) > normal_quantile(alpha / 2);
  return o;
}

ReplicationSummary run_replications(const SimConfig& c) {
  validate(c);
  const Prepared prep = prepare(c);
  ReplicationSummary s;
  s.R = c.R;
  s.outcomes.resize(static_cast<size_t>(c.R));
  const size_t chunks = std::min<size_t>(static_cast<size_t>(c.R), 256);
  parallel_for(chunks, [&](size_t chunk) {
    for (size_t r = chunk; r < static_cast<size_t>(c.R); r += chunks) {
      Rng rng = replication_stream(c.seed, r);
      s.outcomes[r] = run_one(c, prep, rng, nullptr);
    }
  });

  long rejects = 0;
  double sum = 0.0;
  for (const auto& o : s.outcomes) {
    rejects += o.rejected;
    s.degenerate_count += o.degenerate;
    if (std::isfinite(o.gte_hat)) {
      ++s.gte_count;
      sum += o.gte_hat;
    }
  }
  s.reject_rate = double(rejects) / c.R;
  s.reject_se = std::sqrt(s.reject_rate * (1.0 - s.reject_rate) / c.R);
  if (s.gte_count > 0) {
    s.mean_gte_hat = sum / s.gte_count;
    double ss = 0.0;
    for (const auto& o : s.outcomes) {
      if (std::isfinite(o.gte_hat)) ss += (o.gte_hat - s.mean_gte_hat) * (o.gte_hat - s.mean_gte_hat);
    }
    s.gte_hat_var = s.gte_count > 1 ? ss / (s.gte_count - 1) : 0.0;
    s.gte_hat_se = std::sqrt(s.gte_hat_var / s.gte_count);
  } else {
    s.mean_gte_hat = kNaN;
    s.gte_hat_se = kNaN;
  }
  return s;
}

nlohmann::json to_json(const ReplicationSummary& s, const SimConfig& c) {
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  std::string init;
  switch (c.initial.kind) {
    case InitialState::Kind::ControlSteadyState: init = "control_steady_state"; break;
    case InitialState::Kind::TreatmentSteadyState: init = "treatment_steady_state"; break;
    case InitialState::Kind::Fixed: init = "fixed:" + std::to_string(c.initial.k); break;
    case InitialState::Kind::Custom: init = "custom"; break;
  }
  return nlohmann::json{{"reject_rate", s.reject_rate},
                        {"reject_se", s.reject_se},
                        {"mean_gte_hat", num(s.mean_gte_hat)},
                        {"gte_hat_se", num(s.gte_hat_se)},
                        {"degenerate_count", s.degenerate_count},
                        {"config",
                         {{"K", c.model.K},
                          {"lambda", c.model.lambda},
                          {"a", c.a},
                          {"N", c.N},
                          {"R", c.R},
                          {"seed", c.seed},
                          {"alpha", c.alpha},
                          {"initial", init}}}};
}

OracleResult exchangeable_oracle(const JointOutcomes& joint, double a) {
  check_allocation(a, false);
  if (joint.support.empty() || joint.support.size() != joint.prob.size()) {
    throw ValidationError("joint needs matching support and probabilities");
  }
  const size_t N = joint.support.front().size();
  if (N < 2 || N > 6) throw ValidationError("exact enumeration supports 2 <= N <= 6");
  if (joint.support.size() > 64) throw ValidationError("joint support is limited to 64 points");
  double total = 0.0;
  for (size_t s = 0; s < joint.support.size(); ++s) {
    if (joint.support[s].size() != N) throw ValidationError("outcome vectors differ in length");
    if (!(joint.prob[s] >= 0.0)) throw ValidationError("probabilities must be nonnegative");
    total += joint.prob[s];
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("joint probabilities must sum to 1");

  std::vector<size_t> perm(N);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<size_t>> perms;
  do {
    perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  auto moments = [&](bool permuted) {
    // conditional sums: P(A), E[G 1_A] over A = {N1>0,N0>0}; P(B), E[V 1_B], E[G 1_B], E[G^2 1_B] over B = {N1>1,N0>1}
    double pa = 0.0, ga = 0.0, pb = 0.0, vb = 0.0, gb = 0.0, g2b = 0.0;
    std::vector<int> z(N);
    std::vector<double> y(N);
    const double wperm = permuted ? 1.0 / perms.size() : 1.0;
    for (unsigned mask = 0; mask < (1u << N); ++mask) {
      int n1 = 0;
      for (size_t i = 0; i < N; ++i) {
        z[i] = (mask >> i) & 1u;
        n1 += z[i];
      }
      const int n0 = static_cast<int>(N) - n1;
      if (n1 == 0 || n0 == 0) continue;
      const double pz = std::pow(a, n1) * std::pow(1.0 - a, n0);
      for (size_t s = 0; s < joint.support.size(); ++s) {
        const size_t np = permuted ? perms.size() : 1;
        for (size_t pi = 0; pi < np; ++pi) {
          for (size_t i = 0; i < N; ++i) y[i] = permuted ? joint.support[s][perms[pi][i]] : joint.support[s][i];
          const double w = pz * joint.prob[s] * wperm;
          TrajectoryOutcome o = summarize_outcomes(z, y, 0.05);
          pa += w;
          ga += w * o.gte_hat;
          if (n1 > 1 && n0 > 1) {
            pb += w;
            vb += w * o.var_hat;
            gb += w * o.gte_hat;
            g2b += w * o.gte_hat * o.gte_hat;
          }
        }
      }
    }
    ExactMoments em;
    em.mean_gte = ga / pa;
    em.mean_var = pb > 0.0 ? vb / pb : kNaN;
    double mg = pb > 0.0 ? gb / pb : kNaN;
    em.var_gte = pb > 0.0 ? g2b / pb - mg * mg : kNaN;
    return em;
  };
  return {moments(false), moments(true)};
}

}  // namespace abx
