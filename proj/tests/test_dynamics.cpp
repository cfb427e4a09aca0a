#include <cmath>

#include "doctest.h"
#include "infmod/dynamics.hpp"
#include "infmod/error.hpp"
#include "infmod/limits.hpp"

using namespace infmod;

namespace {

RunConfig neutral(ModelKind model) {
  RunConfig c;
  c.model = model;
  c.mortality = MortalitySpec::constant(0.0);
  c.require_hypotheses = false;
  c.init.x0 = 0.0;
  return c;
}

double sup_change_rate(const Density& a, const Density& b, double dt) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e / dt;
}

// rho' = (g - kappa rho) rho / scale
double logistic(double rho0, double g, double kappa, double t) {
  const double k = g / kappa;
  return k / (1.0 + (k / rho0 - 1.0) * std::exp(-g * t));
}

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("configuration guards") {
    RunConfig c;
    c.init.rho0 = 0.0;
    CHECK_THROWS_AS(validate_run_config(c), Error);
    try {
      validate_run_config(c);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::config_invalid);
    }
    RunConfig outside;
    outside.init.x0 = 0.9;  // L = 0.7
    CHECK_THROWS_AS(validate_run_config(outside), Error);
    RunConfig steep;
    steep.mortality = MortalitySpec::quadratic(10.0, 1.0);
    steep.r = 1.0;
    CHECK_THROWS_AS(validate_run_config(steep), Error);
    RunConfig bad_prep;
    bad_prep.init.v0 = 20.0;  // 105 * 20^4 > c1
    CHECK_THROWS_AS(validate_run_config(bad_prep), Error);
    CHECK(model_kind_from_string(to_string(ModelKind::asexual_full)) == ModelKind::asexual_full);
  }

  TEST_CASE("time grid and the half-step companion") {
    RunConfig c;
    c.epsilon = 0.2;
    c.t_end = 1.0;
    c.dt_factor = 0.1;
    const TimeGrid tg = time_grid(c);
    CHECK(tg.steps == 500);  // dt0 = 0.1 * 0.04 / 2
    CHECK(tg.dt * tg.steps == doctest::Approx(1.0));
    const RunConfig h = half_step_config(c);
    CHECK(time_grid(h).steps == 1000);
    CHECK(h.output_stride == 2 * c.output_stride);
  }

  TEST_CASE("zero-duration run echoes the initial state") {
    RunConfig c;
    c.t_end = 0.0;
    const Trajectory tr = simulate(c);
    REQUIRE(tr.samples.size() == 1);
    CHECK(tr.samples[0].t == 0.0);
    CHECK(tr.samples[0].rho == doctest::Approx(c.init.rho0));
    CHECK(tr.samples[0].moments.mean == doctest::Approx(c.init.x0).epsilon(1e-10));
  }

  TEST_CASE("neutral equilibria are stationary") {
    for (ModelKind model : {ModelKind::sexual_full, ModelKind::sexual_renormalized}) {
      RunConfig c = neutral(model);
      c.init.rho0 = c.r / c.kappa;
      const Dynamics dyn(c);
      SimulationState s = dyn.initial_state();
      const Density before = s.density;
      const double dt = 1e-3;
      dyn.step(s, dt);
      CHECK(sup_change_rate(before, s.density, dt) <= 1e-8 * before.max_value());
      CHECK(std::abs(s.rho - c.init.rho0) / dt <= 1e-8);
    }
  }

  TEST_CASE("population size follows the logistic law when m = 0") {
    for (ModelKind model : {ModelKind::sexual_full, ModelKind::sexual_renormalized,
                            ModelKind::asexual_full}) {
      RunConfig c = neutral(model);
      c.init.rho0 = 0.3;
      c.t_end = 0.05;
      c.output_stride = 10;
      const Trajectory tr = simulate(c);
      const double scale = model == ModelKind::asexual_full ? c.epsilon : c.epsilon * c.epsilon;
      for (const auto& s : tr.samples) {
        CHECK(s.rho == doctest::Approx(logistic(0.3, c.r, c.kappa, s.t / scale)).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("renormalized model conserves mass before projection") {
    RunConfig c;
    c.model = ModelKind::sexual_renormalized;
    const Trajectory tr = simulate(c);
    CHECK(tr.max_mass_drift <= 1e-9);
    CHECK(tr.max_projection_deviation <= 1e-9);
  }

  TEST_CASE("default run: mean relaxes toward 0 along the limit ODE") {
    RunConfig c;  // quadratic m, eps = 0.2, x0 = 0.3, t_end = 1
    c.output_stride = 10;
    const Trajectory tr = simulate(c);
    REQUIRE(tr.samples.size() > 10);
    CHECK(tr.samples.back().t == doctest::Approx(1.0));
    for (std::size_t i = 1; i < tr.samples.size(); ++i) {
      CHECK(tr.samples[i].moments.mean < tr.samples[i - 1].moments.mean);
    }
    const double z = integrate_mean_ode(c.mortality, c.init.x0, 1.0).at(1.0);
    CHECK(std::abs(tr.samples.back().moments.mean - z) < 0.05);
    CHECK(tr.positivity_ok);
    CHECK(tr.floor_ok);
    CHECK(tr.ceiling_ok);
    CHECK(tr.l1_ok);
    // Variance locks onto eps^2 after the transient.
    CHECK(tr.samples.back().moments.c(2) == doctest::Approx(0.04).epsilon(0.02));
  }

  TEST_CASE("sampling: stride, final step, stored densities") {
    RunConfig c;
    c.t_end = 0.1;
    c.output_stride = 7;
    c.store_densities = true;
    const Trajectory tr = simulate(c);
    const TimeGrid tg = time_grid(c);
    CHECK(tr.steps == tg.steps);
    CHECK(tr.samples.size() == tg.steps / 7 + 1 + (tg.steps % 7 != 0 ? 1 : 0));
    CHECK(tr.densities.size() == tr.samples.size());
    CHECK(tr.samples.back().t == doctest::Approx(0.1));
    for (const auto& d : tr.densities) CHECK(d.mass() == doctest::Approx(1.0).epsilon(1e-12));
  }
}
