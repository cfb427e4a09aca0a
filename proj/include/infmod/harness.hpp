#pragma once

#include <span>
#include <string>
#include <vector>

#include "infmod/dynamics.hpp"

namespace infmod {

struct SweepSettings {
  std::vector<double> epsilons = {0.4, 0.28, 0.2, 0.14, 0.1, 0.07, 0.05};
  double beta = 1.5;            ///< rho error is measured for t >= eps^beta
  double t_star_factor = 10.0;  ///< variance error is measured for t >= t_star_factor eps^2 / r
  unsigned threads = 1;         ///< 0 = hardware concurrency
};

struct SweepRecord {
  double epsilon = 0.0;
  double sup_W1 = 0.0;                 ///< sup_t W1(q, g_eps)
  double sup_mean_err = 0.0;           ///< sup_t |M1 - Z_eps|
  double sup_var_err = 0.0;            ///< sup_{t >= t*} |M^c_2 - eps^2|
  double sup_high_moment_ratio = 0.0;  ///< sup_t M^c_{2k0} / eps^{2k0}
  double rho_err = 0.0;                ///< sup_{t >= eps^beta} |rho - (r - m(Z)) / kappa|
  double runtime_seconds = 0.0;
  double max_mass_drift = 0.0;
  bool invariants_ok = true;  ///< positivity, floor, ceilings at every sample
  bool ok = true;             ///< false if the run failed
  std::string error;          ///< error kind and message of a failed run
};

/// Field names accepted by record_field / fit_rate.
inline const std::vector<std::string> kRateFields = {"sup_W1", "sup_mean_err", "sup_var_err",
                                                     "sup_high_moment_ratio", "rho_err"};

double record_field(const SweepRecord& rec, const std::string& field);

/// Reduces a trajectory to its sweep record (runtime not filled in).
SweepRecord summarize(const Trajectory& traj, double beta, double t_star_factor);

/// One simulation per epsilon, run concurrently; the result order follows
/// `epsilons`. A failing epsilon is recorded with ok = false and does not
/// stop the others. Throws precondition unless there are at least three
/// strictly decreasing epsilons.
std::vector<SweepRecord> run_sweep(const RunConfig& base, const SweepSettings& settings);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Least-squares line through (log x, log y). Throws nonpositive_values for
/// any x or y <= 0 and insufficient_samples for fewer than three points.
RateFit fit_loglog(std::span<const double> x, std::span<const double> y);

/// Fit of `field` against epsilon over the successful records.
RateFit fit_rate(const std::vector<SweepRecord>& records, const std::string& field);

struct NamedFit {
  std::string field;
  std::string window;  ///< "all" or "drop_largest_2"
  RateFit fit;
  bool ok = true;
  std::string error;
};

/// Every rate field over all epsilons and without the two largest.
std::vector<NamedFit> fit_all(const std::vector<SweepRecord>& records);

/// Records without the `count` largest epsilons.
std::vector<SweepRecord> drop_largest(const std::vector<SweepRecord>& records, std::size_t count);

}  // namespace infmod
