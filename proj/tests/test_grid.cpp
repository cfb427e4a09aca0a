#include <cmath>
#include <numbers>

#include "doctest.h"
#include "infmod/error.hpp"
#include "infmod/grid.hpp"

using namespace infmod;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an infmod::Error");
  return ErrorKind::consistency;
}

}  // namespace

TEST_SUITE("grid") {
  TEST_CASE("nodes and spacing") {
    const TraitGrid g = make_grid(-8.0, 8.0, 17);
    CHECK(g.spacing() == doctest::Approx(1.0));
    for (std::size_t i = 0; i < 17; ++i) CHECK(g.node(i) == doctest::Approx(-8.0 + double(i)));

    const TraitGrid d = make_grid(-6.0, 6.0, 1024);
    CHECK(d.spacing() == doctest::Approx(12.0 / 1023.0).epsilon(1e-15));
    CHECK(d.node(1023) == doctest::Approx(6.0));
  }

  TEST_CASE("bad bounds are rejected") {
    CHECK(kind_of([] { make_grid(1.0, 1.0, 64); }) == ErrorKind::invalid_bounds);
    CHECK(kind_of([] { make_grid(2.0, 1.0, 64); }) == ErrorKind::invalid_bounds);
    // Fewer than 16 points is refused even when the bounds are fine.
    CHECK(kind_of([] { make_grid(-4.0, 4.0, 9); }) == ErrorKind::invalid_bounds);
  }

  TEST_CASE("trapezoid integration") {
    const TraitGrid g = make_grid(-1.0, 1.0, 101);
    CHECK(trapezoid(g, std::vector<double>(101, 1.0)) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(trapezoid(g, std::vector<double>(101, 0.0)) == 0.0);

    // Normal mass inside [-6, 6] for sd 0.2 is 1 - erfc(30 / sqrt 2) = 1 to double precision.
    const TraitGrid w = make_grid(-6.0, 6.0, 1024);
    std::vector<double> v(w.size());
    const double sd = 0.2;
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = std::exp(-0.5 * std::pow(w.node(i) / sd, 2)) / (sd * std::sqrt(2.0 * std::numbers::pi));
    }
    const double oracle = std::erf(6.0 / (sd * std::sqrt(2.0)));
    CHECK(std::abs(trapezoid(w, v) - oracle) < 1e-10);
  }

  TEST_CASE("normalization") {
    const TraitGrid g = make_grid(-1.0, 1.0, 33);
    std::vector<double> v(33);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.5 * (1.0 - g.node(i) * g.node(i));
    const Density d(g, v);
    const Density s = d.scaled(3.0 / d.mass());
    CHECK(s.mass() == doctest::Approx(3.0));
    const Density n = normalize(s);
    CHECK(n.mass() == doctest::Approx(1.0).epsilon(1e-15));
    for (std::size_t i = 0; i < n.size(); ++i) CHECK(n[i] == doctest::Approx(d[i] / d.mass()));

    const Density again = normalize(n);
    for (std::size_t i = 0; i < n.size(); ++i) CHECK(again[i] == doctest::Approx(n[i]).epsilon(1e-15));

    const Density zero(g, std::vector<double>(33, 0.0));
    CHECK(integrate(zero) == 0.0);
    CHECK(kind_of([&] { normalize(zero); }) == ErrorKind::zero_mass);
  }

  TEST_CASE("negative values are rejected") {
    const TraitGrid g = make_grid(0.0, 1.0, 16);
    std::vector<double> v(16, 1.0);
    v[3] = -1e-6;
    CHECK(kind_of([&] { Density(g, v); }) == ErrorKind::negativity_violation);
    v[3] = -1e-14;  // round-off level is tolerated
    CHECK_NOTHROW(Density(g, v));
  }

  TEST_CASE("cdf and quantile") {
    // Uniform density on [0, 1]: F(x) = x.
    const TraitGrid g = make_grid(0.0, 1.0, 101);
    const Density u(g, std::vector<double>(101, 1.0));
    const auto cdf = cumulative_cdf(u);
    for (std::size_t i = 0; i < cdf.size(); ++i) CHECK(std::abs(cdf[i] - g.node(i)) < 1e-10);
    const CdfQuantile cq = cdf_and_quantile(u);
    CHECK(cq.quantile_at(0.25) == doctest::Approx(0.25).epsilon(1e-10));

    // Narrow symmetric bump: median at the centre, within a spacing.
    const TraitGrid w = make_grid(-3.0, 3.0, 512);
    std::vector<double> v(w.size());
    const double mu = 0.37, eps = 0.1;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(-0.5 * std::pow((w.node(i) - mu) / eps, 2));
    const CdfQuantile q = cdf_and_quantile(normalize(Density(w, v)));
    CHECK(std::abs(q.quantile_at(0.5) - mu) <= w.spacing());
    CHECK(q.probability.front() >= kQuantileClip);
    CHECK(q.probability.back() <= 1.0 - kQuantileClip);
  }
}
