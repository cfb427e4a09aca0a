#include <cmath>

#include "doctest.h"
#include "infmod/error.hpp"
#include "infmod/mortality.hpp"

using namespace infmod;

TEST_SUITE("mortality") {
  TEST_CASE("closed-form kinds and derivatives") {
    const auto q = MortalitySpec::quadratic(1.0);
    CHECK(q.m(2.0) == 4.0);
    CHECK(q.m_prime(2.0) == 4.0);
    CHECK(q.m_second(2.0) == 2.0);
    CHECK(q.quadratic_coefficient() == 1.0);

    const auto quartic = MortalitySpec::quartic_well(1.0, 0.25);
    CHECK(quartic.m_prime(0.0) == 0.0);
    CHECK(quartic.m(2.0) == doctest::Approx(4.0 + 4.0));
    CHECK(quartic.m_second(1.0) == doctest::Approx(2.0 + 3.0));

    const auto half = MortalitySpec::quadratic(0.5);
    for (double x : {-3.0, 0.0, 0.7, 10.0}) CHECK(half.m_second(x) == 1.0);

    const auto dw = MortalitySpec::double_well(1.0, 1.0);
    CHECK(dw.m(0.0) == 0.0);
    CHECK(dw.m(1.0) == 0.0);
    CHECK(dw.m(0.5) == doctest::Approx(0.0625));

    const auto c = MortalitySpec::constant(0.3);
    CHECK(c.m(5.0) == 0.3);
    CHECK(c.m_prime(5.0) == 0.0);
    CHECK_THROWS_AS(c.quadratic_coefficient(), Error);
  }

  TEST_CASE("derivatives agree with finite differences") {
    const MortalitySpec specs[] = {MortalitySpec::quadratic(1.3), MortalitySpec::quartic_well(0.7, 0.4),
                                   MortalitySpec::double_well(2.0, 0.8)};
    const double h = 1e-5;
    for (const auto& m : specs) {
      for (double x : {-1.1, -0.2, 0.35, 1.4}) {
        const double d1 = (m.m(x + h) - m.m(x - h)) / (2 * h);
        const double d2 = (m.m_prime(x + h) - m.m_prime(x - h)) / (2 * h);
        CHECK(m.m_prime(x) == doctest::Approx(d1).epsilon(1e-7));
        CHECK(m.m_second(x) == doctest::Approx(d2).epsilon(1e-7));
      }
    }
  }

  TEST_CASE("tabulated spline reproduces a smooth table") {
    std::vector<double> values;
    const double x0 = -3.0, step = 0.05;
    for (int i = 0; i <= 120; ++i) values.push_back(std::pow(x0 + step * i, 2));
    const auto t = MortalitySpec::tabulated(x0, step, values, {});
    for (double x : {-1.234, 0.0, 0.35, 2.1}) {
      CHECK(t.m(x) == doctest::Approx(x * x).epsilon(1e-6).scale(1.0));
      CHECK(t.m_prime(x) == doctest::Approx(2 * x).epsilon(1e-4).scale(1.0));
    }
  }

  TEST_CASE("kind names round-trip") {
    for (auto k : {MortalityKind::quadratic, MortalityKind::quartic_well, MortalityKind::double_well,
                   MortalityKind::tabulated, MortalityKind::constant}) {
      CHECK(mortality_kind_from_string(to_string(k)) == k);
    }
    CHECK_THROWS_AS(mortality_kind_from_string("cubic"), Error);
  }

  TEST_CASE("hypotheses: admissible quadratic") {
    const TraitGrid grid = make_grid(-6.0, 6.0, 1024);
    HypothesisConstants c;
    c.window_half_width = 0.5;
    c.growth_exponent = 1;
    const auto m = MortalitySpec::quadratic(1.0).with_constants(c);
    const HypothesisReport rep = validate_hypotheses(m, grid, 2.0, 4);
    CHECK(rep.h0());
    CHECK(rep.h1);
    CHECK(rep.h2);
    CHECK(rep.max_m_window == doctest::Approx(0.25));
    // eta = 2 (1 - 2 / 256) - 0.25
    CHECK(rep.eta == doctest::Approx(1.734375).epsilon(1e-12));
    CHECK(rep.eta_positive);
  }

  TEST_CASE("hypotheses: failures are reported, not thrown") {
    const TraitGrid grid = make_grid(-6.0, 6.0, 1024);
    const auto steep = MortalitySpec::quadratic(10.0, 1.0);
    const HypothesisReport rep = validate_hypotheses(steep, grid, 1.0, 4);
    CHECK_FALSE(rep.h2);
    CHECK(rep.max_m_window == doctest::Approx(10.0));
    CHECK_FALSE(rep.messages.empty());

    const HypothesisReport low = validate_hypotheses(MortalitySpec::quadratic(1.0), grid, 2.0, 2);
    CHECK_FALSE(low.k0_order_ok);

    // Shifted minimum: inf m is 0.5, not 0.
    const HypothesisReport shifted = validate_hypotheses(MortalitySpec::constant(0.5), grid, 2.0, 5);
    CHECK_FALSE(shifted.h0_infimum_zero);
  }

  TEST_CASE("H0 infimum found between nodes") {
    // 0 is not a node of an even symmetric grid; the refinement must still find inf m = 0.
    const TraitGrid grid = make_grid(-6.0, 6.0, 1024);
    const HypothesisReport rep = validate_hypotheses(MortalitySpec::quadratic(1.0), grid, 2.0, 5);
    CHECK(rep.h0_infimum_zero);
    const HypothesisReport dw =
        validate_hypotheses(MortalitySpec::double_well(1.0, 1.0), grid, 2.0, 5);
    CHECK(dw.h0_infimum_zero);
  }
}
