#include "infmod/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "infmod/error.hpp"
#include "infmod/transport.hpp"

namespace infmod {

namespace {

// (1 - e^{-z}) / z, accurate near 0 and for negative z.
double phi1(double z) {
  if (std::abs(z) < 1e-8) return 1.0 - 0.5 * z;
  return -std::expm1(-z) / z;
}

bool is_sexual(ModelKind k) { return k != ModelKind::asexual_full; }

}  // namespace

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::sexual_full: return "sexual_full";
    case ModelKind::sexual_renormalized: return "sexual_renormalized";
    case ModelKind::asexual_full: return "asexual_full";
  }
  return "?";
}

ModelKind model_kind_from_string(const std::string& name) {
  for (auto k : {ModelKind::sexual_full, ModelKind::sexual_renormalized, ModelKind::asexual_full}) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorKind::config_invalid, "unknown model kind '" + name + "'");
}

MutationKernel AsexualParams::kernel(double epsilon) const {
  if (!kernel_table.empty()) {
    return MutationKernel::tabulated(epsilon, kernel_table_half_width, kernel_table);
  }
  return MutationKernel::gaussian(epsilon, kernel_sd);
}

HypothesisReport validate_run_config(const RunConfig& cfg) {
  auto bad = [](const std::string& what) { throw Error(ErrorKind::config_invalid, what); };
  if (!(cfg.epsilon > 0.0)) bad("epsilon must be positive");
  if (!(cfg.r > 0.0)) bad("r must be positive");
  if (!(cfg.kappa > 0.0)) bad("kappa must be positive");
  if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end)) bad("t_end must be finite and >= 0");
  if (!(cfg.dt_factor > 0.0)) bad("dt_factor must be positive");
  if (cfg.output_stride < 1) bad("output_stride must be >= 1");
  if (cfg.k0 < 1) bad("k0 must be >= 1");
  if (!(cfg.init.v0 > 0.0)) bad("initial variance factor v0 must be positive");
  if (!(cfg.init.rho0 > 0.0)) bad("initial mass rho0 must be positive");
  if (!(cfg.asexual.mutation_rate >= 0.0)) bad("mutation_rate must be >= 0");
  if (!(cfg.asexual.kernel_sd > 0.0)) bad("mutation kernel sd must be positive");

  std::optional<TraitGrid> grid;
  try {
    grid.emplace(cfg.grid.make());
  } catch (const Error& e) {
    bad(std::string("grid: ") + e.what());
  }

  const double L = cfg.mortality.constants().window_half_width;
  if (!(std::abs(cfg.init.x0) < L)) bad("initial center x0 must lie in (-L, L)");
  // M^c_{2k0} of the Gaussian initial datum is (2k0 - 1)!! (v0 eps^2)^{k0}.
  const double m2k0 = double_factorial(2 * cfg.k0 - 1) * std::pow(cfg.init.v0, cfg.k0);
  if (m2k0 > cfg.c1) bad("initial data not well prepared: M^c_{2k0} > c1 eps^{2k0}");

  HypothesisReport rep = validate_hypotheses(cfg.mortality, *grid, cfg.r, cfg.k0);
  if (cfg.require_hypotheses) {
    if (!rep.h0()) bad("mortality violates H0 (m >= 0 with infimum 0)");
    if (is_sexual(cfg.model)) {
      if (!rep.h2) bad("mortality violates H2 (max of m on the window must be below r)");
      if (!rep.eta_positive) bad("a-priori moment condition fails: eta <= 0");
    }
  }
  return rep;
}

TimeGrid time_grid(const RunConfig& cfg) {
  const double scale = is_sexual(cfg.model) ? cfg.epsilon * cfg.epsilon : cfg.epsilon;
  const double dt0 = cfg.dt_factor * scale / cfg.r;
  TimeGrid tg;
  if (cfg.t_end <= 0.0) return tg;
  tg.steps = cfg.fixed_steps > 0 ? cfg.fixed_steps
                                 : static_cast<std::size_t>(std::ceil(cfg.t_end / dt0 - 1e-9));
  tg.steps = std::max<std::size_t>(tg.steps, 1);
  tg.dt = cfg.t_end / static_cast<double>(tg.steps);
  return tg;
}

RunConfig half_step_config(const RunConfig& cfg) {
  RunConfig out = cfg;
  out.fixed_steps = 2 * time_grid(cfg).steps;
  out.output_stride = 2 * cfg.output_stride;
  return out;
}

Density SimulationState::normalized() const {
  if (model == ModelKind::sexual_renormalized) return density;
  return normalize(density);
}

Dynamics::Dynamics(const RunConfig& cfg)
    : cfg_(cfg), grid_(cfg.grid.make()), m_(cfg.mortality.sample(grid_)) {
  if (is_sexual(cfg.model)) {
    mixing_.emplace(grid_, SegregationKernel(cfg.epsilon));
  } else {
    mutation_.emplace(grid_, cfg.asexual.kernel(cfg.epsilon));
  }
}

SimulationState Dynamics::initial_state() const {
  const double sd = cfg_.epsilon * std::sqrt(cfg_.init.v0);
  Density q0 = gaussian_density(cfg_.init.x0, sd, grid_);
  SimulationState s{0.0, q0, cfg_.init.rho0, cfg_.epsilon, cfg_.model};
  if (cfg_.model != ModelKind::sexual_renormalized) s.density = q0.scaled(cfg_.init.rho0);
  return s;
}

void Dynamics::check_values(const std::vector<double>& v, const char* who) const {
  double mx = 0.0, mn = 0.0;
  for (double x : v) {
    if (!std::isfinite(x) || x > kBlowUpThreshold) {
      throw Error(ErrorKind::blow_up, std::string(who) + ": density exceeded 1e12 or became non-finite");
    }
    mx = std::max(mx, x);
    mn = std::min(mn, x);
  }
  if (mn < -kNegativityTolerance * std::max(mx, 1.0)) {
    throw Error(ErrorKind::negativity_violation, who);
  }
}

StepInfo Dynamics::step_sexual_full(SimulationState& s, double dt) const {
  if (!(dt > 0.0)) throw Error(ErrorKind::precondition, "dt must be positive");
  const std::size_t n = grid_.size();
  const double tau = dt / (s.epsilon * s.epsilon);
  const double rho0 = s.density.mass();
  if (!(rho0 > 0.0)) throw Error(ErrorKind::zero_mass, "step_sexual_full");

  // Reproduction exchange r (T[n] - n) with T[n] frozen; conserves mass.
  const std::vector<double> tn = mixing_->double_sum(s.density.values());
  const double keep = std::exp(-cfg_.r * tau);
  const double mix = -std::expm1(-cfg_.r * tau) / rho0;
  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i) next[i] = keep * s.density[i] + mix * tn[i];

  select_and_compete(next, tau);
  check_values(next, "step_sexual_full");
  s.density = Density(grid_, std::move(next));
  s.rho = s.density.mass();
  s.t += dt;
  return {};
}

void Dynamics::select_and_compete(std::vector<double>& n, double tau) const {
  // dn/dtau = (r - m - kappa rho) n has the closed form
  //   n(tau) = n(0) e^{(r - m) tau} / (1 + kappa int_0^tau int n(0) e^{(r - m) s} dx ds).
  double integral = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double b = cfg_.r - m_[i];
    integral += grid_.weight(i) * n[i] * tau * phi1(-b * tau);
  }
  const double c = 1.0 / (1.0 + cfg_.kappa * integral);
  for (std::size_t i = 0; i < n.size(); ++i) n[i] *= std::exp((cfg_.r - m_[i]) * tau) * c;
}

StepInfo Dynamics::step_sexual_renormalized(SimulationState& s, double dt) const {
  if (!(dt > 0.0)) throw Error(ErrorKind::precondition, "dt must be positive");
  const std::size_t n = grid_.size();
  const double tau = dt / (s.epsilon * s.epsilon);

  // Reproduction flow: q' = r (T~[q] - q) with T~[q] frozen.
  const std::vector<double> tq = mixing_->double_sum(s.density.values());
  const double keep = std::exp(-cfg_.r * tau);
  const double mix = -std::expm1(-cfg_.r * tau);
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = keep * s.density[i] + mix * tq[i];
  const double mass_star = trapezoid(grid_, q);

  // Selection flow q' = -(m - int m q) q, solved exactly.
  for (std::size_t i = 0; i < n; ++i) q[i] *= std::exp(-m_[i] * tau);
  const double mass_sel = trapezoid(grid_, q);
  if (!(mass_sel > 0.0)) throw Error(ErrorKind::zero_mass, "step_sexual_renormalized");
  const double ibar = -std::log(mass_sel / mass_star) / tau;
  const double restore = mass_star / mass_sel;
  for (double& v : q) v *= restore;

  StepInfo info;
  const double mass = trapezoid(grid_, q);
  info.mass_drift = std::abs(mass - 1.0);
  info.projection_factor = 1.0 / mass;
  info.selection_average = ibar;
  for (double& v : q) v *= info.projection_factor;
  check_values(q, "step_sexual_renormalized");

  // eps^2 rho' = rho (r - I - kappa rho): logistic, exact for frozen I.
  const double g = cfg_.r - ibar;
  s.rho = s.rho / (std::exp(-g * tau) + cfg_.kappa * s.rho * tau * phi1(g * tau));
  s.density = Density(grid_, std::move(q));
  s.t += dt;
  return info;
}

StepInfo Dynamics::step_asexual(SimulationState& s, double dt) const {
  if (!(dt > 0.0)) throw Error(ErrorKind::precondition, "dt must be positive");
  const std::size_t n = grid_.size();
  const double tau = dt / s.epsilon;
  const double p = cfg_.asexual.mutation_rate;
  if (!(s.density.mass() > 0.0)) throw Error(ErrorKind::zero_mass, "step_asexual");

  // Mutation p (G * n - n) with G * n frozen; conserves mass.
  const std::vector<double> gn = mutation_->convolve(s.density.values());
  const double keep = std::exp(-p * tau);
  const double mix = -std::expm1(-p * tau);
  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i) next[i] = keep * s.density[i] + mix * gn[i];

  select_and_compete(next, tau);
  check_values(next, "step_asexual");
  s.density = Density(grid_, std::move(next));
  s.rho = s.density.mass();
  s.t += dt;
  return {};
}

StepInfo Dynamics::step(SimulationState& s, double dt) const {
  switch (s.model) {
    case ModelKind::sexual_full: return step_sexual_full(s, dt);
    case ModelKind::sexual_renormalized: return step_sexual_renormalized(s, dt);
    case ModelKind::asexual_full: return step_asexual(s, dt);
  }
  throw Error(ErrorKind::precondition, "unknown model");
}

namespace {

struct BoundContext {
  std::vector<double> n0;
  std::vector<double> m;
  double bound_mass = 0.0;  // max(rho0, r / kappa)
  double gamma_sup = 0.0;
};

}  // namespace

Trajectory simulate(const RunConfig& cfg) {
  const HypothesisReport rep = validate_run_config(cfg);
  const Dynamics dyn(cfg);
  const TraitGrid& grid = dyn.grid();
  const TimeGrid tg = time_grid(cfg);
  const double eps = cfg.epsilon;

  SimulationState state = dyn.initial_state();
  const Density q0 = state.normalized();
  const MomentVector mv0 = extract_moments(q0, cfg.k0);

  Trajectory traj;
  traj.config = cfg;
  traj.dt = tg.dt;
  traj.steps = tg.steps;
  traj.mean_path = integrate_mean_ode(cfg.mortality, mv0.mean, cfg.t_end, kMeanOdeStep,
                                      MeanPathVariant::epsilon_initialized);
  traj.limit_path = integrate_mean_ode(cfg.mortality, cfg.init.x0, cfg.t_end, kMeanOdeStep,
                                       MeanPathVariant::limit);
  for (const auto& msg : rep.messages) traj.warnings.push_back("hypotheses: " + msg);
  if (traj.mean_path.left_window()) traj.warnings.emplace_back("mean path left (-L, L)");

  BoundContext bc;
  bc.m = dyn.mortality_samples();
  bc.bound_mass = std::max(cfg.init.rho0, cfg.r / cfg.kappa);
  bc.gamma_sup = SegregationKernel(eps).sup_norm();
  bc.n0.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) bc.n0[i] = state.rho * q0[i];

  bool tail_warned = false;
  double drift_since_sample = 0.0;
  double factor_since_sample = 1.0;

  auto record = [&]() {
    TrajectorySample smp;
    smp.t = state.t;
    smp.rho = state.rho;
    const Density q = state.normalized();
    smp.moments = extract_moments(q, cfg.k0);
    if (smp.moments.tail_warning && !tail_warned) {
      tail_warned = true;
      traj.warnings.emplace_back("moment tail truncation: boundary integrand above 1e-14");
    }
    smp.mean_path = traj.mean_path.at(state.t);
    smp.mean_limit = traj.limit_path.at(state.t);
    smp.w1_to_ansatz = wasserstein1(q, gaussian_profile(smp.mean_path, eps, grid));
    smp.mass_drift = drift_since_sample;
    smp.projection_factor = factor_since_sample;

    double avg = 0.0, mn = 0.0, mx = 0.0;
    bool floor_ok = true, ceiling_ok = true;
    const double tt = state.t / (eps * eps);
    const double ceiling_add = cfg.r * bc.gamma_sup * bc.bound_mass * tt;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double ni = state.rho * q[i];
      mn = std::min(mn, ni);
      mx = std::max(mx, ni);
      avg += grid.weight(i) * bc.m[i] * q[i];
    }
    const double abs_tol = 1e-12 * std::max(mx, 1.0);
    if (is_sexual(cfg.model)) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double ni = state.rho * q[i];
        const double floor = bc.n0[i] * std::exp(-(bc.m[i] + cfg.kappa * bc.bound_mass) * tt);
        if (ni < floor * (1.0 - 1e-9) - abs_tol) floor_ok = false;
        const double ceil = bc.n0[i] + ceiling_add;
        if (ni > ceil * (1.0 + 1e-9) + abs_tol) ceiling_ok = false;
      }
      smp.l1_ok = state.rho <= bc.bound_mass + 1e-8;
    }
    smp.selection_average = avg / q.mass();
    smp.min_value = mn;
    smp.max_value = mx;
    smp.positivity_ok = mn >= -kNegativityTolerance * mx;
    smp.floor_ok = floor_ok;
    smp.ceiling_ok = ceiling_ok;
    if (cfg.record_remainders) smp.remainders = remainder_terms(q, smp.moments, cfg.mortality);

    traj.positivity_ok = traj.positivity_ok && smp.positivity_ok;
    traj.floor_ok = traj.floor_ok && smp.floor_ok;
    traj.ceiling_ok = traj.ceiling_ok && smp.ceiling_ok;
    traj.l1_ok = traj.l1_ok && smp.l1_ok;
    if (cfg.store_densities) traj.densities.push_back(q);
    traj.samples.push_back(std::move(smp));
    drift_since_sample = 0.0;
    factor_since_sample = 1.0;
  };

  record();
  for (std::size_t k = 1; k <= tg.steps; ++k) {
    const StepInfo info = dyn.step(state, tg.dt);
    // Pin the clock to the uniform lattice instead of accumulating dt.
    state.t = static_cast<double>(k) * tg.dt;
    drift_since_sample = std::max(drift_since_sample, info.mass_drift);
    if (std::abs(info.projection_factor - 1.0) > std::abs(factor_since_sample - 1.0)) {
      factor_since_sample = info.projection_factor;
    }
    traj.max_mass_drift = std::max(traj.max_mass_drift, info.mass_drift);
    traj.max_projection_deviation =
        std::max(traj.max_projection_deviation, std::abs(info.projection_factor - 1.0));
    if (k % cfg.output_stride == 0 || k == tg.steps) record();
  }
  return traj;
}

}  // namespace infmod
