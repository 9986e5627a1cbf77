#include "figures.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "abx/asymptotics.hpp"
#include "abx/cramer_rao.hpp"
#include "abx/errors.hpp"
#include "abx/power.hpp"
#include "abx/simulator.hpp"
#include "svg.hpp"

namespace abx::cli {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class CsvFile {
 public:
  CsvFile(const std::string& path, const std::string& header) : path_(path), out_(path) {
    if (!out_) throw ValidationError("cannot write " + path);
    out_ << header << "\n";
  }
  template <typename... T>
  void row(const T&... cells) {
    std::ostringstream os;
    bool first = true;
    ((os << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << os.str() << "\n";
  }
  const std::string& path() const { return path_; }

 private:
  static std::string cell(double x) { return fmt(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(long x) { return std::to_string(x); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  std::string path_;
  std::ofstream out_;
};

std::string path_in(const RunSpec& spec, const std::string& name) {
  return (std::filesystem::path(spec.out) / name).string();
}

const std::vector<int> kFig1K{100, 150, 200, 250, 300};

ModelFamily family_for(const RunSpec& spec) {
  RunSpec copy = spec;
  return [copy](int K) mutable {
    copy.logit.K = K;
    return build_model(copy);
  };
}

std::vector<std::string> fig1(const RunSpec& spec) {
  if (spec.scenario != "logit" && spec.scenario != "meanfield") throw ValidationError("fig1 needs the logit or meanfield scenario");
  GrowthScan scan = growth_scan(family_for(spec), kFig1K, spec.a);
  CsvFile csv(path_in(spec, "fig1.csv"), "K,sigma_ub_sq,naive_limit");
  Series ub{"sigma_ub_sq", {}, {}}, nv{"naive_limit", {}, {}};
  for (const auto& r : scan.rows) {
    csv.row(r.K, r.sigma_ub_sq, r.naive_limit);
    ub.x.push_back(r.K);
    ub.y.push_back(r.sigma_ub_sq);
    nv.x.push_back(r.K);
    nv.y.push_back(r.naive_limit);
  }
  std::cout << "log(sigma_ub_sq) vs K: slope " << scan.slope << ", R^2 " << scan.r2 << "\n";
  std::vector<std::string> files{csv.path()};
  if (wants_format(spec, "svg")) {
    write_svg({"Variance bounds vs K", "K", "scaled variance", false, true, {ub, nv}}, path_in(spec, "fig1.svg"));
    files.push_back(path_in(spec, "fig1.svg"));
  }
  return files;
}

std::vector<double> grid_or(const RunSpec& spec, std::vector<double> fallback) {
  return spec.N_grid.empty() ? fallback : spec.N_grid;
}

void write_curve(CsvFile& csv, const PowerCurve& c) {
  for (const auto& r : c.rows) csv.row(r.N, r.naive, r.unbiased, to_string(c.mode));
}

Chart curve_chart(const PowerCurve& c, const std::string& title, const std::string& ylabel) {
  Series nv{"naive", {}, {}}, ub{"unbiased", {}, {}};
  for (const auto& r : c.rows) {
    nv.x.push_back(r.N);
    nv.y.push_back(r.naive);
    ub.x.push_back(r.N);
    ub.y.push_back(r.unbiased);
  }
  return {title, "N", ylabel, true, false, {nv, ub}};
}

std::vector<std::string> fig2(const RunSpec& spec) {
  PlatformModel m = build_model(spec);
  PowerCurve c = fnp_curves(m, spec.a, grid_or(spec, log_grid(1e3, 1e5, 20)), spec.alpha, spec.scenario);
  CsvFile csv(path_in(spec, "fig2.csv"), "N,metric_naive,metric_unbiased,mode");
  write_curve(csv, c);
  std::vector<std::string> files{csv.path()};
  if (wants_format(spec, "svg")) {
    write_svg(curve_chart(c, "log10 false negative probability", "log10 FNP"), path_in(spec, "fig2.svg"));
    files.push_back(path_in(spec, "fig2.svg"));
  }
  return files;
}

std::vector<std::string> fig3(const RunSpec& spec) {
  PlatformModel m = build_model(spec);
  std::vector<double> grid = grid_or(spec, {100, 250, 500, 1000, 2500, 5000});
  PowerCurve analytic = power_curves(m, spec.a, grid, spec.alpha, CurveMode::Fpp, spec.scenario);
  CsvFile csv(path_in(spec, "fig3.csv"), "N,metric_naive,metric_unbiased,mode");
  CsvFile detail(path_in(spec, "fig3_detail.csv"), "N,mc_reject_rate,mc_se,analytic_naive,degenerate_count");
  Series mc{"naive (Monte Carlo)", {}, {}}, an{"naive (CLT)", {}, {}};
  for (size_t i = 0; i < grid.size(); ++i) {
    SimConfig cfg;
    cfg.model = m;
    cfg.a = spec.a;
    cfg.N = static_cast<long>(grid[i]);
    cfg.R = spec.R;
    cfg.seed = spec.seed + i;
    cfg.alpha = spec.alpha;
    cfg.initial = parse_initial(spec.initial, m);
    ReplicationSummary s = run_replications(cfg);
    csv.row(grid[i], s.reject_rate, analytic.rows[i].unbiased, "fpp_monte_carlo");
    detail.row(grid[i], s.reject_rate, s.reject_se, analytic.rows[i].naive, s.degenerate_count);
    mc.x.push_back(grid[i]);
    mc.y.push_back(s.reject_rate);
    an.x.push_back(grid[i]);
    an.y.push_back(analytic.rows[i].naive);
    std::cout << "N=" << grid[i] << " reject_rate=" << s.reject_rate << " (se " << s.reject_se << ")\n";
  }
  std::vector<std::string> files{csv.path(), detail.path()};
  if (wants_format(spec, "svg")) {
    write_svg({"False positive probability of the naive test", "N", "FPP", true, false, {mc, an}},
              path_in(spec, "fig3.svg"));
    files.push_back(path_in(spec, "fig3.svg"));
  }
  return files;
}

std::vector<std::string> fig4(const RunSpec& spec) {
  PlatformModel m = build_model(spec);
  PowerCurve c = power_curves(m, spec.a, grid_or(spec, log_grid(1e3, 1e5, 20)), spec.alpha, CurveMode::Power,
                              spec.scenario);
  CsvFile csv(path_in(spec, "fig4.csv"), "N,metric_naive,metric_unbiased,mode");
  write_curve(csv, c);
  std::vector<std::string> files{csv.path()};
  if (wants_format(spec, "svg")) {
    write_svg(curve_chart(c, "Power of naive and unbiased tests", "power"), path_in(spec, "fig4.svg"));
    files.push_back(path_in(spec, "fig4.svg"));
  }
  return files;
}

struct Sweep {
  std::string name;
  std::vector<double> variance_values;
  std::vector<double> power_values;
  void (*apply)(RunSpec&, double);
};

std::vector<std::string> appendix_c(const RunSpec& base) {
  if (base.scenario != "logit" && base.scenario != "meanfield") {
    throw ValidationError("appendixC sweeps need the logit or meanfield scenario");
  }
  const std::vector<Sweep> sweeps{
      {"K", {100, 150, 200, 250, 300}, {100, 200, 300, 400}, [](RunSpec& s, double v) { s.logit.K = static_cast<int>(v); }},
      {"lambda_over_tau", {1.5, 1.75, 2.0, 2.25, 2.5}, {1.5, 1.8, 2.2, 2.5},
       [](RunSpec& s, double v) { s.logit.lambda_bar = v * s.logit.tau_bar; }},
      {"eps_bar", {0.5, 0.75, 1.0, 1.25, 1.5}, {0.5, 0.8, 1.2, 1.5}, [](RunSpec& s, double v) { s.logit.eps_bar = v; }},
      {"delta", {0.01, 0.025, 0.05, 0.075, 0.1}, {0.01, 0.02, 0.03, 0.04}, [](RunSpec& s, double v) { s.logit.delta = v; }},
  };
  const std::vector<double> grid = grid_or(base, log_grid(1e3, 1e5, 20));
  CsvFile var_csv(path_in(base, "appendixC_variance.csv"), "parameter,value,K,sigma_ub_sq,naive_limit");
  CsvFile pow_csv(path_in(base, "appendixC_power.csv"), "parameter,value,N,metric_naive,metric_unbiased,mode");
  std::vector<std::string> files{var_csv.path(), pow_csv.path()};
  for (const auto& sw : sweeps) {
    Series ub{"sigma_ub_sq", {}, {}}, nv{"naive_limit", {}, {}};
    for (double v : sw.variance_values) {
      RunSpec s = base;
      sw.apply(s, v);
      PlatformModel m = build_model(s);
      double naive = centered_variance(m, s.a, 1) / s.a + centered_variance(m, s.a, 0) / (1.0 - s.a);
      double cr = cr_lower_bound(m, s.a).sigma_ub_sq;
      var_csv.row(sw.name, v, m.K, cr, naive);
      ub.x.push_back(v);
      ub.y.push_back(cr);
      nv.x.push_back(v);
      nv.y.push_back(naive);
    }
    Chart power_chart{"log10 FNP, varying " + sw.name, "N", "log10 FNP", true, false, {}};
    for (double v : sw.power_values) {
      RunSpec s = base;
      sw.apply(s, v);
      PowerCurve c = fnp_curves(build_model(s), s.a, grid, s.alpha, s.scenario);
      Series a{"naive " + sw.name + "=" + fmt(v), {}, {}}, b{"unbiased " + sw.name + "=" + fmt(v), {}, {}};
      for (const auto& r : c.rows) {
        pow_csv.row(sw.name, v, r.N, r.naive, r.unbiased, to_string(c.mode));
        a.x.push_back(r.N);
        a.y.push_back(r.naive);
        b.x.push_back(r.N);
        b.y.push_back(r.unbiased);
      }
      power_chart.series.push_back(a);
      power_chart.series.push_back(b);
    }
    if (wants_format(base, "svg")) {
      std::string vpath = path_in(base, "appendixC_variance_" + sw.name + ".svg");
      std::string ppath = path_in(base, "appendixC_power_" + sw.name + ".svg");
      write_svg({"Variance bounds, varying " + sw.name, sw.name, "scaled variance", false, true, {ub, nv}}, vpath);
      write_svg(power_chart, ppath);
      files.push_back(vpath);
      files.push_back(ppath);
    }
  }
  return files;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{"fig1", "fig2", "fig3", "fig4", "appendixC"};
  return ids;
}

std::vector<std::string> make_figure(const RunSpec& spec) {
  std::filesystem::create_directories(spec.out);
  if (spec.figure == "fig1") return fig1(spec);
  if (spec.figure == "fig2") return fig2(spec);
  if (spec.figure == "fig3") return fig3(spec);
  if (spec.figure == "fig4") return fig4(spec);
  if (spec.figure == "appendixC") return appendix_c(spec);
  throw ValidationError("unknown figure id '" + spec.figure + "' (expected fig1, fig2, fig3, fig4, appendixC)");
}

}  // namespace abx::cli
