// Command-line front end: simulate, sweep, validate, asexual.
//
// Exit status: 0 when every check passes, 1 when any check fails,
// 2 for configuration or usage errors.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "infmod/checks.hpp"
#include "infmod/config.hpp"
#include "infmod/error.hpp"
#include "infmod/harness.hpp"
#include "infmod/output.hpp"
#include "infmod/residuals.hpp"

namespace fs = std::filesystem;
using namespace infmod;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct Options {
  std::string config;
  std::string out_dir = "out";
  bool emit_plots = false;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
};

class Output {
 public:
  explicit Output(const std::string& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(ErrorKind::config_invalid, "cannot create output directory '" + dir + "'");
  }

  void write(const std::string& name, const std::string& text) const {
    write_text((dir_ / name).string(), text);
  }

 private:
  fs::path dir_;
};

int report(const std::vector<CheckResult>& checks) {
  bool all = true;
  for (const auto& c : checks) {
    std::printf("%s %s value=%s threshold=%s%s%s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                format_double(c.value).c_str(), format_double(c.threshold).c_str(),
                c.detail.empty() ? "" : "  # ", c.detail.c_str());
    all = all && c.pass;
  }
  return all ? kExitPass : kExitFail;
}

PlotSeries series(std::string label, const Trajectory& tr, double (*get)(const TrajectorySample&)) {
  PlotSeries s{std::move(label), {}, {}};
  for (const auto& smp : tr.samples) {
    s.x.push_back(smp.t);
    s.y.push_back(get(smp));
  }
  return s;
}

int cmd_simulate(const AppConfig& app, const Output& out, bool plots) {
  validate_run_config(app.run);
  const Trajectory tr = simulate(app.run);
  out.write("trajectory.csv", trajectory_csv(tr));
  out.write("mean_path.csv", mean_path_csv(tr.mean_path));
  out.write("limit_path.csv", mean_path_csv(tr.limit_path));

  std::vector<CheckResult> checks = invariant_checks({&tr});
  if (tr.config.model == ModelKind::sexual_full && tr.config.record_remainders) {
    const Trajectory fine = simulate(half_step_config(app.run));
    const ResidualReport rep = moment_ode_residuals(tr, &fine);
    out.write("residuals.csv", residuals_csv(rep));
    checks.push_back({"moment_residual_mean", rep.max_r1 <= 5.0 * rep.max_tol1,
                      rep.max_r1 / rep.max_tol1, 5.0, "sup |R1| / sup tolerance"});
    checks.push_back({"moment_residual_variance", rep.max_r2 <= 5.0 * rep.max_tol2,
                      rep.max_r2 / rep.max_tol2, 5.0, "sup |R2| / sup tolerance"});
  }
  for (const auto& w : tr.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  out.write("checks.csv", suite_csv(checks));

  if (plots) {
    PlotOptions o{"Variance", "t", "M2c", false, false};
    out.write("variance.svg",
              svg_line_plot({series("M2c", tr, [](const TrajectorySample& s) { return s.moments.c(2); })}, o));
    PlotSeries mean = series("M1", tr, [](const TrajectorySample& s) { return s.moments.mean; });
    PlotSeries path = series("Z_eps", tr, [](const TrajectorySample& s) { return s.mean_path; });
    out.write("mean.svg", svg_line_plot({mean, path}, {"Mean trait", "t", "M1", false, false}));
    out.write("rho.svg", svg_line_plot({series("rho", tr, [](const TrajectorySample& s) { return s.rho; })},
                                       {"Population size", "t", "rho", false, false}));
  }
  return report(checks);
}

int cmd_sweep(const AppConfig& app, const Output& out, bool plots, std::optional<unsigned> threads) {
  validate_run_config(app.run);
  SweepSettings st = app.sweep;
  if (threads) st.threads = *threads;
  const std::vector<SweepRecord> records = run_sweep(app.run, st);
  out.write("sweep.csv", sweep_csv(records));
  out.write("fits.csv", fits_csv(fit_all(records)));
  out.write("timings.csv", timings_csv(records));
  for (const auto& r : records) {
    if (!r.ok) std::fprintf(stderr, "epsilon %g failed: %s\n", r.epsilon, r.error.c_str());
  }
  const std::vector<CheckResult> checks = sweep_gates(records);
  out.write("sweep_checks.csv", suite_csv(checks));

  if (plots) {
    std::vector<PlotSeries> s;
    for (const auto& field : kRateFields) {
      if (field == "sup_high_moment_ratio") continue;
      PlotSeries p{field, {}, {}};
      for (const auto& r : records) {
        if (!r.ok) continue;
        p.x.push_back(r.epsilon);
        p.y.push_back(record_field(r, field));
      }
      s.push_back(std::move(p));
    }
    out.write("sweep.svg", svg_line_plot(s, {"Errors against epsilon", "epsilon", "error", true, true}));
  }
  return report(checks);
}

int cmd_validate(const AppConfig& app, const Output& out, std::optional<std::uint64_t> seed) {
  SuiteConfig cfg = app.suite;
  if (seed) cfg.seed = *seed;
  const SuiteReport rep = run_validation_suite(cfg);
  out.write("suite.csv", suite_csv(rep.checks));
  return report(rep.checks);
}

int cmd_asexual(const AppConfig& app, const Output& out, bool plots) {
  const ContrastReport rep = run_asexual_contrast(app.run, app.contrast);
  out.write("contrast.csv", contrast_csv(rep));
  for (const auto& run : rep.runs) {
    char name[64];
    std::snprintf(name, sizeof name, "asexual_residuals_s%g.csv", run.selection);
    out.write(name, residuals_csv(run.residuals));
  }
  out.write("contrast_checks.csv", suite_csv(rep.checks));

  if (plots) {
    std::vector<PlotSeries> s;
    for (const auto& run : rep.runs) {
      char a[32], x[32];
      std::snprintf(a, sizeof a, "asexual s=%g", run.selection);
      std::snprintf(x, sizeof x, "sexual s=%g", run.selection);
      auto var = [](const TrajectorySample& smp) { return smp.moments.c(2); };
      s.push_back(series(a, run.asexual, var));
      s.push_back(series(x, run.sexual, var));
    }
    out.write("contrast.svg", svg_line_plot(s, {"Variance: sexual vs asexual", "t", "M2c", false, false}));
  }
  return report(rep.checks);
}

bool is_config_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::config_invalid:
    case ErrorKind::under_resolved:
    case ErrorKind::invalid_bounds:
    case ErrorKind::grid_too_large:
    case ErrorKind::precondition:
      return true;
    default:
      return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Infinitesimal-model population dynamics: simulation, convergence sweeps, validation"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--config", opt.config, "YAML configuration file (defaults are used if omitted)");
  app.add_option("--out-dir", opt.out_dir, "Directory for CSV (and SVG) output")->capture_default_str();
  app.add_flag("--emit-plots", opt.emit_plots, "Also write SVG plots");
  app.add_option("--threads", opt.threads, "Worker threads for sweeps (0 = all cores)");
  app.add_option("--seed", opt.seed, "Seed for the random densities of the validation suite");

  auto* sim = app.add_subcommand("simulate", "Run one simulation and write its trajectory");
  auto* sweep = app.add_subcommand("sweep", "Run the epsilon sweep and fit convergence rates");
  auto* val = app.add_subcommand("validate", "Run the validation suite");
  auto* asex = app.add_subcommand("asexual", "Compare variance dynamics of the asexual and sexual models");
  for (auto* sub : {sim, sweep, val, asex}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    const AppConfig cfg = opt.config.empty() ? parse_config("{}") : load_config(opt.config);
    const Output out(opt.out_dir);
    if (sim->parsed()) return cmd_simulate(cfg, out, opt.emit_plots);
    if (sweep->parsed()) return cmd_sweep(cfg, out, opt.emit_plots, opt.threads);
    if (val->parsed()) return cmd_validate(cfg, out, opt.seed);
    return cmd_asexual(cfg, out, opt.emit_plots);
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", to_string(e.kind()), e.what());
    return is_config_error(e.kind()) ? kExitConfig : kExitFail;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFail;
  }
}
