#include <cmath>

#include "doctest.h"
#include "infmod/error.hpp"
#include "infmod/limits.hpp"
#include "infmod/moments.hpp"

using namespace infmod;

TEST_SUITE("limits") {
  TEST_CASE("mean ODE for quadratic mortality is exponential decay") {
    const auto m = MortalitySpec::quadratic(0.5);
    const MeanPath p = integrate_mean_ode(m, 0.3, 1.0);
    CHECK(p.at(1.0) == doctest::Approx(0.3 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(p.at(0.3337) == doctest::Approx(0.3 * std::exp(-0.3337)).epsilon(1e-11));
    CHECK(p.at(1.0) == doctest::Approx(0.110364).epsilon(1e-5));
    CHECK_FALSE(p.left_window());

    const MeanPath zero = integrate_mean_ode(m, 0.0, 2.0);
    for (double z : zero.values()) CHECK(z == 0.0);
  }

  TEST_CASE("quartic well: monotone and step-converged") {
    const auto m = MortalitySpec::quartic_well(1.0, 0.5);
    const MeanPath a = integrate_mean_ode(m, 0.6, 2.0, 1e-3);
    const MeanPath b = integrate_mean_ode(m, 0.6, 2.0, 5e-4);
    for (std::size_t i = 1; i < a.values().size(); ++i) CHECK(a.values()[i] < a.values()[i - 1]);
    for (double t : {0.1, 0.77, 2.0}) CHECK(std::abs(a.at(t) - b.at(t)) <= 1e-10);
  }

  TEST_CASE("start outside the window is refused") {
    CHECK_THROWS_AS(integrate_mean_ode(MortalitySpec::quadratic(1.0, 0.5), 0.6, 1.0), Error);
  }

  TEST_CASE("Gaussian profile") {
    const TraitGrid grid = make_grid(-3.0, 3.0, 601);  // 0 is node 300
    const Density g = gaussian_profile(0.0, 0.1, grid);
    CHECK(g[300] == doctest::Approx(3.98942).epsilon(1e-5));
    CHECK(extract_moments(g, 2).c(2) == doctest::Approx(0.01).epsilon(1e-8));
    try {
      gaussian_profile(0.0, grid.spacing(), grid);
      FAIL("expected under_resolved");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::under_resolved);
    }
    CHECK_THROWS_AS(gaussian_profile(5.0, 0.1, grid), Error);
  }

  TEST_CASE("population size limit") {
    const auto m = MortalitySpec::quadratic(1.0);
    CHECK(rho_limit_at(m, 0.5, 2.0, 1.0) == doctest::Approx(1.75));

    const RhoLimit late = rho_limit(m, integrate_mean_ode(m, 0.3, 20.0), 2.0, 1.0);
    CHECK(late.rho.back() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_FALSE(late.any_nonpositive);

    const auto wide = MortalitySpec::quadratic(1.0, 2.0);
    const RhoLimit low = rho_limit(wide, integrate_mean_ode(wide, 1.0, 0.01), 0.1, 1.0);
    CHECK(low.any_nonpositive);
    CHECK(low.nonpositive.front());
  }
}
