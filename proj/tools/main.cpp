#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "abx/asymptotics.hpp"
#include "abx/cramer_rao.hpp"
#include "abx/errors.hpp"
#include "abx/simulator.hpp"
#include "figures.hpp"
#include "run_spec.hpp"

using nlohmann::json;
using namespace abx;
using namespace abx::cli;

namespace {

struct Flags {
  std::string config, scenario, model, tau, format, out, initial, outside_scale;
  int K = 0;
  double lambda_bar = 0, tau_bar = 0, v0 = 0, delta = 0, eps_bar = 0, a = 0, alpha = 0;
  long N = 0, R = 0;
  std::uint64_t seed = 0;
  std::vector<double> N_grid;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON settings file (overrides scenario defaults)");
  sub->add_option("--scenario", f.scenario, "logit, example1, example2 or meanfield")
      ->check(CLI::IsMember({"logit", "example1", "example2", "meanfield"}));
  sub->add_option("--model", f.model, "JSON model file (replaces the scenario model)");
  sub->add_option("--K", f.K, "number of listings");
  sub->add_option("--lambda-bar", f.lambda_bar, "arrival rate per listing");
  sub->add_option("--tau", f.tau, "holding-rate shape")->check(CLI::IsMember({"linear", "constant"}));
  sub->add_option("--tau-bar", f.tau_bar, "holding-rate scale");
  sub->add_option("--v0", f.v0, "control value of a listing");
  sub->add_option("--delta", f.delta, "treatment lift in value");
  sub->add_option("--eps-bar", f.eps_bar, "outside option");
  sub->add_option("--outside-scale", f.outside_scale, "none, or K to use K * eps-bar")
      ->check(CLI::IsMember({"none", "K"}));
  sub->add_option("--a", f.a, "treatment allocation");
  sub->add_option("--N", f.N, "customers per experiment");
  sub->add_option("--R", f.R, "Monte Carlo replications");
  sub->add_option("--alpha", f.alpha, "significance level");
  sub->add_option("--seed", f.seed, "base random seed");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--format", f.format, "csv, json or svg")->check(CLI::IsMember({"csv", "json", "svg"}));
  sub->add_option("--initial", f.initial, "control, treatment or fixed:<k>");
  sub->add_option("--N-grid", f.N_grid, "explicit N values for curves")->delimiter(',');
  sub->add_flag("--aa", "replace p1 by p0 (A/A experiment)");
  sub->add_flag("--strict", "enforce strictly decreasing booking probabilities");
  sub->add_flag("--per-rep", "also write per-replication CSV");
}

json flag_overlay(const CLI::App* sub, const Flags& f) {
  json o = json::object();
  auto given = [&](const char* name) { return sub->count(name) > 0; };
  if (given("--scenario")) o["scenario"] = f.scenario;
  if (given("--model")) o["model"] = f.model;
  if (given("--K")) o["K"] = f.K;
  if (given("--lambda-bar")) o["lambda_bar"] = f.lambda_bar;
  if (given("--tau")) o["tau"] = f.tau;
  if (given("--tau-bar")) o["tau_bar"] = f.tau_bar;
  if (given("--v0")) o["v0"] = f.v0;
  if (given("--delta")) o["delta"] = f.delta;
  if (given("--eps-bar")) o["eps_bar"] = f.eps_bar;
  if (given("--outside-scale")) o["outside_scale"] = f.outside_scale;
  if (given("--a")) o["a"] = f.a;
  if (given("--N")) o["N"] = f.N;
  if (given("--R")) o["R"] = f.R;
  if (given("--alpha")) o["alpha"] = f.alpha;
  if (given("--seed")) o["seed"] = f.seed;
  if (given("--out")) o["out"] = f.out;
  if (given("--format")) o["format"] = f.format;
  if (given("--initial")) o["initial"] = f.initial;
  if (given("--N-grid")) o["N_grid"] = f.N_grid;
  if (given("--aa")) o["aa"] = true;
  if (given("--strict")) o["strict"] = true;
  if (given("--per-rep")) o["per_rep"] = true;
  return o;
}

std::string natural_scenario(const std::string& figure) {
  if (figure == "fig3") return "example1";
  if (figure == "fig4") return "example2";
  return "logit";
}

void write_json(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << doc.dump(2) << "\n";
}

int cmd_analyze(const RunSpec& spec) {
  std::vector<std::string> warnings;
  PlatformModel m = build_model(spec, &warnings);
  AsymptoticReport r = dm_asymptotic_variance(m, spec.a);
  CRBound cr = cr_lower_bound(m, spec.a);
  std::filesystem::create_directories(spec.out);
  const auto dir = std::filesystem::path(spec.out);
  write_json((dir / "report.json").string(), to_json(r));
  write_json((dir / "cr_bound.json").string(),
             json{{"K", cr.K},
                  {"sigma_ub_sq", cr.sigma_ub_sq},
                  {"treatment_part", cr.treatment_part},
                  {"control_part", cr.control_part}});
  std::printf("scenario        %s (K=%d, lambda=%g)\n", spec.model_path.empty() ? spec.scenario.c_str() : spec.model_path.c_str(),
              m.K, m.lambda);
  std::printf("sign class      %s\n", to_string(classify_sign(m)).c_str());
  std::printf("rho0            %.6f\n", booking_rate(m, Arm::control()));
  std::printf("rho1            %.6f\n", booking_rate(m, Arm::treatment()));
  std::printf("gte             %.6g\n", r.gte);
  std::printf("ade             %.6g\n", r.ade);
  std::printf("v0, v1          %.6g, %.6g\n", r.v0, r.v1);
  std::printf("cov_tail        %.6g\n", r.cov_tail);
  std::printf("sigma_tilde_sq  %.6g\n", r.sigma_tilde_sq);
  std::printf("naive_limit     %.6g\n", r.naive_limit);
  std::printf("sigma_ub_sq     %.6g\n", cr.sigma_ub_sq);
  for (const auto& w : warnings) std::printf("warning         %s\n", w.c_str());
  return 0;
}

int cmd_simulate(const RunSpec& spec) {
  std::vector<std::string> warnings;
  SimConfig cfg;
  cfg.model = build_model(spec, &warnings);
  cfg.a = spec.a;
  cfg.N = spec.N;
  cfg.R = spec.R;
  cfg.seed = spec.seed;
  cfg.alpha = spec.alpha;
  cfg.initial = parse_initial(spec.initial, cfg.model);
  ReplicationSummary s = run_replications(cfg);
  std::filesystem::create_directories(spec.out);
  const auto dir = std::filesystem::path(spec.out);
  json doc = to_json(s, cfg);
  doc["config"]["scenario"] = spec.scenario;
  write_json((dir / "summary.json").string(), doc);
  if (spec.per_rep) {
    std::ofstream out(dir / "replications.csv");
    if (!out) throw ValidationError("cannot write replications.csv");
    out << "rep,gte_hat,var_hat,t_stat,n1,n0,rejected\n";
    char buf[160];
    for (size_t r = 0; r < s.outcomes.size(); ++r) {
      const auto& o = s.outcomes[r];
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%ld,%ld,%d\n", r, o.gte_hat, o.var_hat, o.t_stat, o.n1,
                    o.n0, o.rejected ? 1 : 0);
      out << buf;
    }
  }
  std::printf("reject_rate %.6f (se %.6f), mean_gte_hat %.6g (se %.3g), degenerate %ld\n", s.reject_rate, s.reject_se,
              s.mean_gte_hat, s.gte_hat_se, s.degenerate_count);
  for (const auto& w : warnings) std::printf("warning: %s\n", w.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"abx: exact analysis and simulation of A/B experiments on an inventory-constrained platform"};
  app.require_subcommand(1);
  Flags f;
  std::string figure;
  auto* analyze = app.add_subcommand("analyze", "CLT and Cramer-Rao report for one scenario");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo replications of the experiment");
  auto* figures = app.add_subcommand("figures", "reproduce a figure or sweep as CSV");
  figures->add_option("figure", figure, "fig1, fig2, fig3, fig4 or appendixC")->required();
  for (auto* sub : {analyze, simulate, figures}) add_common(sub, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    json overlay = flag_overlay(sub, f);
    json file = f.config.empty() ? json::object() : read_config(f.config);
    std::string scenario = sub == figures ? natural_scenario(figure) : "logit";
    if (file.contains("scenario")) scenario = file.at("scenario").get<std::string>();
    if (overlay.contains("scenario")) scenario = overlay.at("scenario").get<std::string>();

    json settings = scenario_defaults(scenario);
    if (sub == figures && figure == "fig3") settings["R"] = 50000;
    settings = merge_settings(settings, file, "config file");
    settings = merge_settings(settings, overlay, "command line");
    if (sub == figures) settings["figure"] = figure;

    RunSpec spec = spec_from_settings(sub->get_name(), settings);
    if (sub == analyze) return cmd_analyze(spec);
    if (sub == simulate) return cmd_simulate(spec);
    for (const auto& path : make_figure(spec)) std::cout << "wrote " << path << "\n";
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
