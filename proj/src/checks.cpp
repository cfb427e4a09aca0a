#include "infmod/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "infmod/error.hpp"
#include "infmod/moments.hpp"
#include "infmod/transport.hpp"

namespace infmod {

namespace {

CheckResult le(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value <= threshold, value, threshold, std::move(detail)};
}

CheckResult ge(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value >= threshold, value, threshold, std::move(detail)};
}

double sup_abs_diff(const Density& a, const Density& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

struct Mixture {
  std::vector<double> weight, center, sd;
};

Mixture random_mixture(std::mt19937_64& rng, double center_range, double sd_min, double sd_max) {
  std::uniform_int_distribution<int> count(1, 3);
  std::uniform_real_distribution<double> w(0.2, 1.0);
  std::uniform_real_distribution<double> c(-center_range, center_range);
  std::uniform_real_distribution<double> s(sd_min, sd_max);
  Mixture mix;
  const int k = count(rng);
  for (int i = 0; i < k; ++i) {
    mix.weight.push_back(w(rng));
    mix.center.push_back(c(rng));
    mix.sd.push_back(s(rng));
  }
  return mix;
}

Density sample_mixture(const Mixture& mix, const TraitGrid& grid, double shift = 0.0) {
  std::vector<double> v(grid.size(), 0.0);
  for (std::size_t k = 0; k < mix.weight.size(); ++k) {
    const double norm = mix.weight[k] / (std::sqrt(2.0 * std::numbers::pi) * mix.sd[k]);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double u = (grid.node(i) - mix.center[k] - shift) / mix.sd[k];
      v[i] += norm * std::exp(-0.5 * u * u);
    }
  }
  const double mass = trapezoid(grid, v);
  for (double& x : v) x /= mass;
  return Density(grid, std::move(v));
}

double mixture_mean(const Mixture& mix) {
  double m = 0.0, w = 0.0;
  for (std::size_t k = 0; k < mix.weight.size(); ++k) {
    m += mix.weight[k] * mix.center[k];
    w += mix.weight[k];
  }
  return m / w;
}

}  // namespace

bool SuiteReport::all_pass() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

Density random_density(const TraitGrid& grid, std::mt19937_64& rng, double center_range,
                       double sd_min, double sd_max) {
  return sample_mixture(random_mixture(rng, center_range, sd_min, sd_max), grid);
}

CheckResult check_kernel_moments(const SuiteConfig& cfg) {
  const double eps = cfg.operator_epsilon;
  const SegregationKernel kernel(eps, std::sqrt(cfg.kernel_variance_scale));
  const double h = cfg.base.grid.make().spacing();
  const std::vector<double> samples = kernel.sample_centred(h);
  const auto K = static_cast<double>(samples.size() / 2);
  double worst = 0.0;
  for (int l = 0; l <= 6; ++l) {
    double quad = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double x = (static_cast<double>(i) - K) * h;
      quad += h * samples[i] * std::pow(x, 2 * l);
    }
    const double exact = kernel_even_moment(l, eps);
    worst = std::max(worst, std::abs(quad - exact) / exact);
  }
  return le("kernel_moments", worst, 1e-9, "relative, l = 0..6");
}

std::vector<CheckResult> check_operator_algebra(const SuiteConfig& cfg) {
  const TraitGrid grid = cfg.base.grid.make();
  const double eps = cfg.operator_epsilon;
  const MixingOperator op(grid, SegregationKernel(eps));
  const KernelMoments km = make_kernel_moments(eps, 4);
  std::mt19937_64 rng(cfg.seed);
  double worst = 0.0, worst_identity = 0.0;
  for (std::size_t n = 0; n < cfg.random_densities; ++n) {
    const Density q = random_density(grid, rng);
    const MomentVector mq = extract_moments(q, 4);
    const MomentVector mt = extract_moments(op.apply_normalized(q), 4);
    for (int k = 1; k <= 4; ++k) {
      const double pred = predict_T_moment(mq, k, km);
      worst = std::max(worst, std::abs(pred - mt.c(2 * k)) / std::abs(mt.c(2 * k)));
    }
    const double identity = 0.5 * eps * eps + 0.5 * mq.c(2);
    worst_identity = std::max(worst_identity, std::abs(mt.c(2) - identity) / identity);
  }
  return {le("T_moment_algebra", worst, 1e-6, "relative, 2k = 2..8"),
          le("T_variance_identity", worst_identity, 1e-9, "relative, k = 1")};
}

CheckResult check_operator_fixed_point(const SuiteConfig& cfg) {
  const TraitGrid grid = cfg.base.grid.make();
  double worst = 0.0;
  for (double eps : cfg.fixed_point_epsilons) {
    const Density g = gaussian_profile(cfg.base.init.x0, eps, grid);
    const Density tg = apply_T_fast(g, SegregationKernel(eps));
    worst = std::max(worst, sup_abs_diff(tg, g) / g.max_value());
  }
  return le("operator_fixed_point", worst, 1e-6, "sup-norm relative");
}

CheckResult check_reference_fast(const SuiteConfig& cfg) {
  const TraitGrid grid(-4.0, 4.0, 128);
  const SegregationKernel kernel(0.3);
  const MixingOperator op(grid, kernel);
  std::mt19937_64 rng(cfg.seed + 1);
  double worst = 0.0;
  for (std::size_t n = 0; n < cfg.random_densities; ++n) {
    const Density q = random_density(grid, rng, 1.0, 0.2, 0.6);
    worst = std::max(worst, sup_abs_diff(apply_T_reference(q, kernel), op.apply_normalized(q)));
  }
  return le("reference_fast_equivalence", worst, 1e-10, "sup-norm, N = 128");
}

CheckResult check_tanaka(const SuiteConfig& cfg) {
  const TraitGrid grid = cfg.base.grid.make();
  const MixingOperator op(grid, SegregationKernel(cfg.operator_epsilon));
  std::mt19937_64 rng(cfg.seed + 2);
  std::size_t passed = 0;
  double worst_excess = -1e300;
  for (std::size_t n = 0; n < cfg.contraction_pairs; ++n) {
    const Mixture ma = random_mixture(rng, 1.0, 0.15, 0.6);
    const Mixture mb = random_mixture(rng, 1.0, 0.15, 0.6);
    // Equal means: shift b onto the mean of a.
    const Density a = sample_mixture(ma, grid);
    const Density b = sample_mixture(mb, grid, mixture_mean(ma) - mixture_mean(mb));
    const ContractionResult res = contraction_check(a, b, op);
    if (res.pass) ++passed;
    worst_excess = std::max(worst_excess, res.lhs - res.rhs);
  }
  CheckResult c = ge("tanaka_contraction", static_cast<double>(passed),
                     static_cast<double>(cfg.contraction_pairs), "pairs passing");
  c.detail += "; max lhs - rhs = " + std::to_string(worst_excess);
  return c;
}

CheckResult check_selection_average(const SuiteConfig& cfg) {
  const TraitGrid grid = cfg.base.grid.make();
  const MortalitySpec specs[] = {MortalitySpec::quadratic(1.0), MortalitySpec::quartic_well(1.0, 0.5),
                                 MortalitySpec::double_well(1.0, 1.0)};
  std::mt19937_64 rng(cfg.seed + 3);
  double worst = 0.0;
  for (std::size_t n = 0; n < cfg.random_densities; ++n) {
    const Density q = random_density(grid, rng);
    for (const auto& m : specs) {
      try {
        const SelectionAverage s = selection_average(q, m);
        worst = std::max(worst, std::abs(s.direct - s.decomposed) / std::abs(s.direct));
      } catch (const Error&) {
        worst = std::max(worst, 1.0);
      }
    }
  }
  return le("selection_average_decomposition", worst, 1e-9, "relative");
}

std::vector<CheckResult> invariant_checks(const std::vector<const Trajectory*>& runs) {
  double drift = 0.0, projection = 0.0;
  bool positivity = true, floor = true, l1 = true, ceiling = true;
  for (const Trajectory* t : runs) {
    drift = std::max(drift, t->max_mass_drift);
    projection = std::max(projection, t->max_projection_deviation);
    positivity = positivity && t->positivity_ok;
    floor = floor && t->floor_ok;
    l1 = l1 && t->l1_ok;
    ceiling = ceiling && t->ceiling_ok;
  }
  auto flag = [](const char* name, bool ok) { return CheckResult{name, ok, ok ? 1.0 : 0.0, 1.0, {}}; };
  return {le("mass_drift_per_step", drift, 1e-8, "renormalized model, before projection"),
          le("projection_factor", projection, 1e-8, "|factor - 1|"),
          flag("positivity", positivity),
          flag("positivity_floor", floor),
          flag("l1_ceiling", l1),
          flag("pointwise_ceiling", ceiling)};
}

std::vector<CheckResult> check_invariants(const SuiteConfig& cfg) {
  std::vector<Trajectory> runs;
  for (ModelKind model : {ModelKind::sexual_full, ModelKind::sexual_renormalized}) {
    for (double eps : {0.2, 0.1}) {
      RunConfig c = cfg.base;
      c.model = model;
      c.epsilon = eps;
      runs.push_back(simulate(c));
    }
  }
  std::vector<const Trajectory*> ptrs;
  for (const auto& t : runs) ptrs.push_back(&t);
  return invariant_checks(ptrs);
}

CheckResult check_exact_transient(const SuiteConfig& cfg) {
  double worst = 0.0;
  for (double eps : {0.2, 0.1}) {
    RunConfig c = cfg.base;
    c.model = ModelKind::sexual_renormalized;
    c.mortality = MortalitySpec::constant(0.0);
    c.require_hypotheses = false;
    c.epsilon = eps;
    c.init.v0 = 2.0;
    c.t_end = 20.0 * eps * eps / c.r;
    c.dt_factor = 1e-3;
    c.output_stride = 100;
    const Trajectory tr = simulate(c);
    const double eps2 = eps * eps;
    const double v0 = tr.samples.front().moments.c(2);
    for (const auto& s : tr.samples) {
      const double exact = eps2 + (v0 - eps2) * std::exp(-c.r * s.t / (2.0 * eps2));
      worst = std::max(worst, std::abs(s.moments.c(2) - exact) / exact);
    }
  }
  return le("exact_variance_transient", worst, 1e-4, "m = 0, relative, eps in {0.2, 0.1}");
}

std::vector<CheckResult> check_moment_residuals(const SuiteConfig& cfg) {
  RunConfig c = cfg.base;
  c.model = ModelKind::sexual_full;
  c.record_remainders = true;
  c.output_stride = 1;
  const Trajectory coarse = simulate(c);
  const Trajectory fine = simulate(half_step_config(c));
  const ResidualReport rep = moment_ode_residuals(coarse, &fine);
  return {le("moment_residual_mean", rep.max_r1 / rep.max_tol1, 5.0, "sup |R1| / sup tolerance"),
          le("moment_residual_variance", rep.max_r2 / rep.max_tol2, 5.0, "sup |R2| / sup tolerance"),
          le("remainder_forms_agree", rep.max_form_gap, 1e-10, "Taylor-integral vs closed form"),
          le("remainder_bound_F1", rep.fitted_c1, 3.0, "fitted constant"),
          le("remainder_bound_F2", rep.fitted_c2, 3.0, "fitted constant")};
}

ContrastReport run_asexual_contrast(const RunConfig& base, const ContrastSettings& st) {
  ContrastReport rep;
  for (double s : st.selection) {
    RunConfig a = base;
    a.model = ModelKind::asexual_full;
    a.mortality = MortalitySpec::quadratic(s, base.mortality.constants().window_half_width);
    a.epsilon = st.epsilon;
    a.grid = st.grid;
    a.t_end = st.t_end;
    a.output_stride = 1;
    a.store_densities = false;
    a.record_remainders = false;

    RunConfig x = a;
    x.model = ModelKind::sexual_full;
    x.output_stride = st.sexual_stride;

    ContrastRun run;
    run.selection = s;
    run.asexual = simulate(a);
    const Trajectory fine = simulate(half_step_config(a));
    run.residuals = asexual_moment_residuals(run.asexual, &fine);
    run.sexual = simulate(x);
    rep.runs.push_back(std::move(run));
  }

  const double eps2 = st.epsilon * st.epsilon;
  double worst_locking = 0.0;
  for (const auto& run : rep.runs) {
    char tag[32];
    std::snprintf(tag, sizeof tag, "s=%g", run.selection);
    rep.checks.push_back(le("asexual_residual_mean", run.residuals.max_r1 / run.residuals.max_tol1,
                            st.residual_factor, tag));
    rep.checks.push_back(le("asexual_residual_variance",
                            run.residuals.max_r2 / run.residuals.max_tol2, st.residual_factor, tag));
    for (const auto& smp : run.sexual.samples) {
      worst_locking = std::max(worst_locking, std::abs(smp.moments.c(2) / eps2 - 1.0));
    }
  }

  // Smallest relative gap between the asexual variances of the two most
  // different selection strengths, over the shared times in the second half.
  double min_gap = 0.0;
  if (rep.runs.size() >= 2) {
    const auto& a = rep.runs.front().asexual.samples;
    const auto& b = rep.runs.back().asexual.samples;
    min_gap = 1e300;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
      if (a[i].t < 0.5 * st.t_end) continue;
      const double va = a[i].moments.c(2), vb = b[i].moments.c(2);
      min_gap = std::min(min_gap, std::abs(va - vb) / std::max(va, vb));
    }
  }
  rep.checks.push_back(ge("asexual_variance_contrast", min_gap, st.min_difference,
                          "min relative gap, t >= t_end / 2"));
  rep.checks.push_back(le("sexual_variance_locking", worst_locking, st.locking_band,
                          "max |M2 / eps^2 - 1| over all samples"));
  return rep;
}

SuiteReport run_validation_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  auto add = [&rep](CheckResult c) { rep.checks.push_back(std::move(c)); };
  auto add_all = [&rep](std::vector<CheckResult> cs) {
    for (auto& c : cs) rep.checks.push_back(std::move(c));
  };
  // A check that throws is reported as failed instead of aborting the suite.
  auto guarded = [&](const char* name, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      add(CheckResult{name, false, 0.0, 0.0, e.what()});
    }
  };
  guarded("operator_fixed_point", [&] { add(check_operator_fixed_point(cfg)); });
  guarded("reference_fast_equivalence", [&] { add(check_reference_fast(cfg)); });
  guarded("kernel_moments", [&] { add(check_kernel_moments(cfg)); });
  guarded("T_moment_algebra", [&] { add_all(check_operator_algebra(cfg)); });
  guarded("selection_average_decomposition", [&] { add(check_selection_average(cfg)); });
  guarded("invariants", [&] { add_all(check_invariants(cfg)); });
  guarded("tanaka_contraction", [&] { add(check_tanaka(cfg)); });
  guarded("exact_variance_transient", [&] { add(check_exact_transient(cfg)); });
  guarded("moment_residuals", [&] { add_all(check_moment_residuals(cfg)); });
  guarded("asexual_contrast", [&] { add_all(run_asexual_contrast(cfg.base, cfg.contrast).checks); });
  return rep;
}

std::vector<CheckResult> sweep_gates(const std::vector<SweepRecord>& records,
                                     const SweepGates& gates) {
  std::vector<CheckResult> out;
  std::size_t failed = 0;
  bool invariants = true;
  double lo = 1e300, hi = 0.0;
  for (const auto& r : records) {
    if (!r.ok) {
      ++failed;
      continue;
    }
    invariants = invariants && r.invariants_ok;
    lo = std::min(lo, r.sup_high_moment_ratio);
    hi = std::max(hi, r.sup_high_moment_ratio);
  }
  out.push_back(le("sweep_failed_runs", static_cast<double>(failed), 0.0));
  out.push_back(CheckResult{"sweep_invariants", invariants, invariants ? 1.0 : 0.0, 1.0, {}});

  const std::vector<SweepRecord> window = drop_largest(records, 2);
  auto slope_gate = [&](const char* name, const char* field, double min_slope) {
    try {
      const RateFit f = fit_rate(window, field);
      CheckResult c = ge(name, f.slope, min_slope, "r^2 = " + std::to_string(f.r_squared));
      return std::make_pair(c, f);
    } catch (const Error& e) {
      return std::make_pair(CheckResult{name, false, 0.0, min_slope, e.what()}, RateFit{});
    }
  };
  out.push_back(slope_gate("rate_mean", "sup_mean_err", gates.min_mean_slope).first);
  out.push_back(slope_gate("rate_variance", "sup_var_err", gates.min_variance_slope).first);
  const double spread = (lo > 0.0 && hi >= lo) ? hi / lo : 1e300;
  out.push_back(le("high_moment_spread", spread, gates.max_high_moment_spread, "max / min"));
  const auto w1 = slope_gate("rate_W1", "sup_W1", gates.min_w1_slope);
  out.push_back(w1.first);
  out.push_back(ge("rate_W1_r_squared", w1.second.r_squared, gates.min_w1_r_squared));
  out.push_back(slope_gate("rate_rho", "rho_err", gates.min_rho_slope).first);
  return out;
}

}  // namespace infmod
