#pragma once

#include <string>
#include <vector>

#include "infmod/checks.hpp"
#include "infmod/dynamics.hpp"
#include "infmod/harness.hpp"
#include "infmod/limits.hpp"
#include "infmod/residuals.hpp"

namespace infmod {

// CSV serializers. Every floating-point value is written with %.17g so the
// text round-trips exactly; nothing time- or host-dependent goes into these
// files, which keeps repeated runs byte-identical.

/// Shortest exact text form of a double (`%.17g`; nan/inf spelled out).
std::string format_double(double v);

/// t,rho,M1,M2c,M4c,M2k0c,W1_to_ansatz,mass_drift,min_value
std::string trajectory_csv(const Trajectory& traj);
/// epsilon,sup_W1,sup_mean_err,sup_var_err,sup_high_moment_ratio,rho_err,
/// max_mass_drift,invariants_ok,status,error
std::string sweep_csv(const std::vector<SweepRecord>& records);
/// field,window,slope,intercept,r_squared,points,status
std::string fits_csv(const std::vector<NamedFit>& fits);
/// epsilon,runtime_seconds -- kept apart from the sweep CSV on purpose.
std::string timings_csv(const std::vector<SweepRecord>& records);
/// check_name,pass,value,threshold
std::string suite_csv(const std::vector<CheckResult>& checks);
/// t,R1,R2,F1_exact,F1_bound,F2_exact,F2_bound
std::string residuals_csv(const ResidualReport& report);
/// t,z
std::string mean_path_csv(const MeanPath& path);
/// model,selection,t,M1,M2c -- the paired variance trajectories.
std::string contrast_csv(const ContrastReport& report);

/// Writes `text` to `path`; throws config_invalid if the file cannot be written.
void write_text(const std::string& path, const std::string& text);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 640;
  int height = 420;
};

/// Standalone SVG line chart. Points that cannot be drawn (non-finite, or
/// nonpositive on a log axis) are skipped.
std::string svg_line_plot(const std::vector<PlotSeries>& series, const PlotOptions& opt);

}  // namespace infmod
