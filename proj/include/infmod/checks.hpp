#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "infmod/dynamics.hpp"
#include "infmod/harness.hpp"
#include "infmod/residuals.hpp"

namespace infmod {

/// One line of the validation report: `check_name,pass,value,threshold`.
struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

/// Sexual vs asexual comparison at one small epsilon and two selection strengths.
struct ContrastSettings {
  double epsilon = 0.03;
  GridSpec grid{-2.0, 2.0, 1024};
  std::vector<double> selection = {1.0, 4.0};
  double t_end = 1.0;
  std::size_t sexual_stride = 10;
  double min_difference = 0.10;  ///< asexual variances must differ by at least this (relative)
  double locking_band = 0.02;    ///< sexual variance must stay within this of eps^2
  double residual_factor = 5.0;  ///< residuals vs discretization tolerance
};

struct ContrastRun {
  double selection = 0.0;
  Trajectory asexual;
  Trajectory sexual;
  ResidualReport residuals;
};

struct ContrastReport {
  std::vector<ContrastRun> runs;
  std::vector<CheckResult> checks;
};

/// Runs the asexual and full sexual models for every selection strength
/// (m = s x^2, other parameters from `base`) and compares the variances.
/// Asexual variances are compared at the shared sample times in the second
/// half of the run, after the initial relaxation.
ContrastReport run_asexual_contrast(const RunConfig& base, const ContrastSettings& settings);

struct SuiteConfig {
  std::uint64_t seed = 20240611;
  std::size_t random_densities = 50;
  std::size_t contraction_pairs = 100;
  double operator_epsilon = 0.2;
  std::vector<double> fixed_point_epsilons = {0.4, 0.28, 0.2, 0.14, 0.1, 0.07, 0.05};
  /// Fault injection: multiplies the variance of the kernel used by the
  /// kernel-moment check (and nothing else). 1 = no fault.
  double kernel_variance_scale = 1.0;
  RunConfig base;
  ContrastSettings contrast;
};

struct SuiteReport {
  std::vector<CheckResult> checks;
  bool all_pass() const noexcept;
};

/// Seeded mixture of one to three Gaussians, normalized on the grid.
/// `center_range` bounds the component centers, sd is drawn from [sd_min, sd_max].
Density random_density(const TraitGrid& grid, std::mt19937_64& rng, double center_range = 1.0,
                       double sd_min = 0.15, double sd_max = 0.6);

CheckResult check_kernel_moments(const SuiteConfig& cfg);
/// T-moment algebra for 2k = 2..8, plus the variance identity at k = 1.
std::vector<CheckResult> check_operator_algebra(const SuiteConfig& cfg);
CheckResult check_operator_fixed_point(const SuiteConfig& cfg);
CheckResult check_reference_fast(const SuiteConfig& cfg);
CheckResult check_tanaka(const SuiteConfig& cfg);
CheckResult check_selection_average(const SuiteConfig& cfg);
/// Mass drift, projection, positivity, floor and ceilings over sexual runs.
std::vector<CheckResult> check_invariants(const SuiteConfig& cfg);
/// Invariant checks over already computed trajectories.
std::vector<CheckResult> invariant_checks(const std::vector<const Trajectory*>& runs);
/// m = 0 variance relaxation against its closed form, eps in {0.2, 0.1}.
CheckResult check_exact_transient(const SuiteConfig& cfg);
/// Sexual moment-equation residuals and remainder bounds.
std::vector<CheckResult> check_moment_residuals(const SuiteConfig& cfg);

SuiteReport run_validation_suite(const SuiteConfig& cfg);

/// Rate gates on a sweep, fitted without the two largest epsilons.
struct SweepGates {
  double min_mean_slope = 0.8;
  double min_variance_slope = 2.7;
  double max_high_moment_spread = 10.0;  ///< max / min of sup M^c_{2k0} / eps^{2k0}
  double min_w1_slope = 0.8;
  double min_w1_r_squared = 0.98;
  double min_rho_slope = 0.8;
};

/// Gate results for a finished sweep; every run must also have succeeded with
/// its invariants intact. A fit that cannot be formed fails its gate.
std::vector<CheckResult> sweep_gates(const std::vector<SweepRecord>& records,
                                     const SweepGates& gates = {});

}  // namespace infmod
