#pragma once

#include <optional>
#include <string>
#include <vector>

#include "infmod/grid.hpp"
#include "infmod/limits.hpp"
#include "infmod/moments.hpp"
#include "infmod/mortality.hpp"
#include "infmod/operators.hpp"

namespace infmod {

enum class ModelKind { sexual_full, sexual_renormalized, asexual_full };

const char* to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

struct GridSpec {
  double x_min = -6.0;
  double x_max = 6.0;
  std::size_t n_points = 1024;

  TraitGrid make() const { return TraitGrid(x_min, x_max, n_points); }
};

/// Gaussian initial data: center x0, variance v0 * eps^2, mass rho0.
struct InitialData {
  double x0 = 0.3;
  double v0 = 1.0;
  double rho0 = 1.0;
};

struct AsexualParams {
  double mutation_rate = 1.0;  ///< p
  double kernel_sd = 1.0;      ///< Gaussian base kernel, used when no table is given
  std::vector<double> kernel_table;
  double kernel_table_half_width = 0.0;

  MutationKernel kernel(double epsilon) const;
};

struct RunConfig {
  ModelKind model = ModelKind::sexual_full;
  MortalitySpec mortality = MortalitySpec::quadratic(1.0);
  double r = 2.0;
  double kappa = 1.0;
  double epsilon = 0.2;
  GridSpec grid;
  InitialData init;
  double t_end = 1.0;
  /// dt = dt_factor * eps^2 / r for the sexual models, dt_factor * eps / r
  /// for the asexual model; shrunk so that t_end is reached exactly.
  double dt_factor = 0.1;
  /// If nonzero, the number of steps to t_end (dt_factor is then ignored).
  std::size_t fixed_steps = 0;
  std::size_t output_stride = 1;
  int k0 = 4;
  /// Well-prepared data: M^c_{2k0}(0) <= c1 * eps^{2k0}.
  double c1 = 1e4;
  /// Enforce H0, H2 and eta > 0 before running (sexual models).
  bool require_hypotheses = true;
  AsexualParams asexual;
  bool store_densities = false;
  /// Evaluate the moment-equation remainders at every sample.
  bool record_remainders = false;
};

/// Throws config_invalid on a malformed or non-admissible configuration.
/// Returns the hypothesis report (with any warnings in its messages).
HypothesisReport validate_run_config(const RunConfig& cfg);

/// Time step and step count for a configuration.
struct TimeGrid {
  double dt = 0.0;
  std::size_t steps = 0;
};
TimeGrid time_grid(const RunConfig& cfg);

/// The same run with exactly twice the steps and twice the output stride,
/// so that both runs are sampled at the same times.
RunConfig half_step_config(const RunConfig& cfg);

/// `density` is n for the full models and q for the renormalized model,
/// whose population size is carried separately in `rho`.
struct SimulationState {
  double t = 0.0;
  Density density;
  double rho = 0.0;
  double epsilon = 0.0;
  ModelKind model = ModelKind::sexual_full;

  /// The probability density n / rho (or q itself).
  Density normalized() const;
};

struct StepInfo {
  double mass_drift = 0.0;         ///< |mass - 1| before projection (renormalized model)
  double projection_factor = 1.0;  ///< 1 / mass applied at step end
  double selection_average = 0.0;  ///< substep average of int m q (renormalized model)
};

inline constexpr double kBlowUpThreshold = 1e12;

/// Operators and sampled coefficients for one configuration.
class Dynamics {
 public:
  explicit Dynamics(const RunConfig& cfg);

  const RunConfig& config() const noexcept { return cfg_; }
  const TraitGrid& grid() const noexcept { return grid_; }
  const std::vector<double>& mortality_samples() const noexcept { return m_; }

  SimulationState initial_state() const;

  /// eps^2 dn/dt = r T[n] - (m + kappa rho) n, split as
  ///   r (T[n] - n)          exponential Euler with T[n] frozen (mass preserving)
  ///   (r - m - kappa rho) n  solved exactly (per-node exponential, logistic rho).
  StepInfo step_sexual_full(SimulationState& s, double dt) const;

  /// eps^2 dq/dt = r (T~[q] - q) - (m - int m q) q, split into the
  /// reproduction flow (exponential Euler, a convex combination of q and
  /// T~[q]) followed by the exactly solved selection flow, then projected
  /// back to unit mass. rho follows the logistic law with the substep
  /// selection average.
  StepInfo step_sexual_renormalized(SimulationState& s, double dt) const;

  /// eps dn/dt = p (G_eps * n - n) + (r - m - kappa rho) n, split like the
  /// full sexual model with the mutation exchange in place of reproduction.
  StepInfo step_asexual(SimulationState& s, double dt) const;

  StepInfo step(SimulationState& s, double dt) const;

 private:
  void check_values(const std::vector<double>& v, const char* who) const;
  /// Exact flow of dn/dtau = (r - m - kappa rho) n over tau.
  void select_and_compete(std::vector<double>& n, double tau) const;

  RunConfig cfg_;
  TraitGrid grid_;
  std::vector<double> m_;
  std::optional<MixingOperator> mixing_;
  std::optional<MutationOperator> mutation_;
};

struct TrajectorySample {
  double t = 0.0;
  double rho = 0.0;
  MomentVector moments;
  double mean_path = 0.0;   ///< Z_eps(t), started from M1(0)
  double mean_limit = 0.0;  ///< Z(t), started from x0
  double w1_to_ansatz = 0.0;
  double mass_drift = 0.0;  ///< largest pre-projection drift since the previous sample
  double projection_factor = 1.0;
  double min_value = 0.0;
  double max_value = 0.0;
  double selection_average = 0.0;  ///< int m q at the sample
  bool positivity_ok = true;
  bool floor_ok = true;
  bool ceiling_ok = true;
  bool l1_ok = true;
  std::optional<RemainderTerms> remainders;
};

struct Trajectory {
  RunConfig config;
  double dt = 0.0;
  std::size_t steps = 0;
  std::vector<TrajectorySample> samples;
  std::vector<Density> densities;  ///< normalized q at each sample, if stored
  MeanPath mean_path;
  MeanPath limit_path;
  double max_mass_drift = 0.0;
  double max_projection_deviation = 0.0;
  bool positivity_ok = true;
  bool floor_ok = true;
  bool ceiling_ok = true;
  bool l1_ok = true;
  std::vector<std::string> warnings;
};

/// Validated, deterministic run of one configuration.
Trajectory simulate(const RunConfig& cfg);

}  // namespace infmod
