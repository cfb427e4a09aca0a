#include <cmath>
#include <random>

#include "doctest.h"
#include "infmod/checks.hpp"
#include "infmod/error.hpp"
#include "infmod/limits.hpp"
#include "infmod/moments.hpp"
#include "infmod/operators.hpp"

using namespace infmod;

TEST_SUITE("moments") {
  TEST_CASE("Gaussian moments") {
    const TraitGrid grid = make_grid(-6.0, 6.0, 1024);
    const double eps = 0.2, z = 0.3;
    const MomentVector m = extract_moments(gaussian_profile(z, eps, grid), 4);
    CHECK(m.mean == doctest::Approx(z).epsilon(1e-8));
    CHECK(m.c(2) == doctest::Approx(eps * eps).epsilon(1e-8));
    CHECK(std::abs(m.c(3)) <= 1e-8 * std::pow(eps, 3));
    CHECK(m.c(4) == doctest::Approx(3 * std::pow(eps, 4)).epsilon(1e-8));
    CHECK(m.c(8) == doctest::Approx(105 * std::pow(eps, 8)).epsilon(1e-8));
    CHECK(m.c(0) == 1.0);
    CHECK(m.c(1) == 0.0);
    CHECK_FALSE(m.tail_warning);
    CHECK_THROWS_AS(m.c(9), Error);

    // Symmetric input: odd central moments vanish.
    const MomentVector s = extract_moments(gaussian_density(0.0, 0.7, grid), 3);
    CHECK(std::abs(s.c(3)) <= 1e-12);
    CHECK(std::abs(s.c(5)) <= 1e-12);
    // Absolute first moment of N(0, sd^2) is sd sqrt(2 / pi); the kink of |x| between
    // nodes limits the trapezoid rule to O(h^2).
    CHECK(s.abs_c(1) == doctest::Approx(0.7 * std::sqrt(2.0 / M_PI)).epsilon(1e-4));
  }

  TEST_CASE("two-bump mixture") {
    const TraitGrid grid = make_grid(-4.0, 4.0, 2048);
    const Density a = gaussian_density(-1.0, 0.1, grid), b = gaussian_density(1.0, 0.1, grid);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * (a[i] + b[i]);
    const MomentVector m = extract_moments(Density(grid, v), 2);
    CHECK(std::abs(m.mean) <= 1e-12);
    CHECK(m.c(2) == doctest::Approx(1.0 + 0.01).epsilon(1e-8));
  }

  TEST_CASE("tail warning on a truncated density") {
    const TraitGrid grid = make_grid(-1.0, 1.0, 256);
    const MomentVector m = extract_moments(gaussian_density(0.0, 0.5, grid), 4);
    CHECK(m.tail_warning);
  }

  TEST_CASE("kernel moment table") {
    const KernelMoments km = make_kernel_moments(0.3, 4);
    CHECK(km.k0() == 4);
    CHECK(km.sigma[1] == doctest::Approx(0.5));
    CHECK(km.sigma[2] == doctest::Approx(0.75));
    CHECK(km.sigma[3] == doctest::Approx(15.0 / 8.0));
    CHECK(km.even_moment(2) == doctest::Approx(0.75 * std::pow(0.3, 4)));
    CHECK(double_factorial(7) == 105.0);
    CHECK(double_factorial(-1) == 1.0);
    CHECK(binomial(8, 3) == 56.0);
  }

  TEST_CASE("predicted moments of the mixing operator") {
    const double eps = 0.2;
    const KernelMoments km = make_kernel_moments(eps, 4);

    // Point mass: only the kernel moments survive.
    MomentVector dirac;
    dirac.k0 = 4;
    dirac.central.assign(9, 0.0);
    dirac.abs_central.assign(9, 0.0);
    dirac.central[0] = dirac.abs_central[0] = 1.0;
    for (int k = 1; k <= 4; ++k) {
      CHECK(predict_T_moment(dirac, k, km) == doctest::Approx(km.even_moment(k)).epsilon(1e-14));
    }

    const TraitGrid grid = make_grid(-6.0, 6.0, 1024);
    std::mt19937_64 rng(11);
    const MixingOperator op(grid, SegregationKernel(eps));
    for (int n = 0; n < 5; ++n) {
      const Density q = random_density(grid, rng);
      const MomentVector mq = extract_moments(q, 4);
      const MomentVector mt = extract_moments(op.apply_normalized(q), 4);
      CHECK(predict_T_moment(mq, 1, km) == doctest::Approx(0.5 * eps * eps + 0.5 * mq.c(2)).epsilon(1e-12));
      CHECK(predict_T_moment(mq, 2, km) == doctest::Approx(mt.c(4)).epsilon(1e-6));
      CHECK(mt.mean == doctest::Approx(mq.mean).epsilon(1e-9));
    }

    const MomentVector low = extract_moments(gaussian_profile(0.0, eps, grid), 1);
    CHECK_THROWS_AS(predict_T_moment(low, 2, km), Error);
  }

  TEST_CASE("Taylor remainder") {
    const auto quad = MortalitySpec::quadratic(1.7);
    for (double X : {-0.4, 0.0, 1.2}) {
      for (double x : {-2.0, X, 0.5}) CHECK(taylor_remainder(quad, X, x, 0.01) == doctest::Approx(1.7));
    }
    // m = x^2 + x^4 at X = 0, x = 1: (m(1) - m(0) - m'(0)) / 1 = 2.
    const auto qw = MortalitySpec::quartic_well(1.0, 1.0);
    CHECK(taylor_remainder(qw, 0.0, 1.0, 0.01) == doctest::Approx(2.0));
    CHECK(taylor_remainder(qw, 0.5, 0.5, 0.01) == doctest::Approx(qw.m_second(0.5) / 2));
  }

  TEST_CASE("selection average") {
    const TraitGrid grid = make_grid(-6.0, 6.0, 1024);
    const double mu = 0.4, sd = 0.3, s = 1.5;
    const Density q = gaussian_density(mu, sd, grid);
    const SelectionAverage a = selection_average(q, MortalitySpec::quadratic(s));
    CHECK(a.direct == doctest::Approx(s * (mu * mu + sd * sd)).epsilon(1e-9));
    CHECK(a.decomposed == doctest::Approx(a.direct).epsilon(1e-12));

    CHECK(selection_average(q, MortalitySpec::constant(0.8)).direct == doctest::Approx(0.8));
    const double eps = 0.1;
    CHECK(selection_average(gaussian_profile(0.0, eps, grid), MortalitySpec::quadratic(1.0)).direct ==
          doctest::Approx(eps * eps).epsilon(1e-8));
  }

  TEST_CASE("remainder terms") {
    const TraitGrid grid = make_grid(-6.0, 6.0, 1024);
    const double eps = 0.2, s = 1.0;
    const Density g = gaussian_profile(0.3, eps, grid);
    const MomentVector mv = extract_moments(g, 4);

    const RemainderTerms zero = remainder_terms(g, mv, MortalitySpec::constant(0.0));
    CHECK(zero.f1_exact == 0.0);
    CHECK(zero.f2_exact == 0.0);

    // Quadratic m: F1 = s M3 (zero here) and F2 = s (M2^2 - M4) = -2 s eps^4.
    const RemainderTerms rt = remainder_terms(g, mv, MortalitySpec::quadratic(s));
    CHECK(std::abs(rt.f1_exact) <= 1e-12);
    CHECK(rt.f2_exact == doctest::Approx(-2.0 * s * std::pow(eps, 4)).epsilon(1e-7));
    CHECK(rt.f2_direct == doctest::Approx(rt.f2_exact).epsilon(1e-10));
    CHECK(std::abs(rt.f2_exact) <= 3.0 * rt.f2_bound);

    // Skewed input: F1 = s M3.
    const Density a = gaussian_density(-0.2, 0.2, grid), b = gaussian_density(0.5, 0.3, grid);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.7 * a[i] + 0.3 * b[i];
    const Density mix(grid, v);
    const MomentVector mm = extract_moments(mix, 4);
    const RemainderTerms sk = remainder_terms(mix, mm, MortalitySpec::quadratic(s));
    CHECK(sk.f1_exact == doctest::Approx(s * mm.c(3)).epsilon(1e-9));
    CHECK(sk.f1_direct == doctest::Approx(sk.f1_exact).epsilon(1e-9));
    CHECK(std::abs(sk.f1_exact) <= 3.0 * sk.f1_bound);
  }
}
