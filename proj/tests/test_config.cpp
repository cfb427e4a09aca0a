#include <string>

#include "doctest.h"
#include "infmod/config.hpp"
#include "infmod/error.hpp"

using namespace infmod;

namespace {

ErrorKind parse_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::consistency;  // no error
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("empty document gives the defaults") {
    const AppConfig a = parse_config("");
    const AppConfig b = parse_config("{}");
    const RunConfig d;
    for (const AppConfig* c : {&a, &b}) {
      CHECK(c->run.epsilon == d.epsilon);
      CHECK(c->run.r == d.r);
      CHECK(c->run.grid.n_points == d.grid.n_points);
      CHECK(c->run.mortality.kind() == MortalityKind::quadratic);
      CHECK(c->sweep.epsilons == SweepSettings{}.epsilons);
      CHECK(c->suite.seed == SuiteConfig{}.seed);
      CHECK(c->suite.base.epsilon == c->run.epsilon);
    }
  }

  TEST_CASE("values are read") {
    const AppConfig c = parse_config(R"(
model: sexual_renormalized
epsilon: 0.1
r: 3
grid: {x_min: -4, x_max: 4, n_points: 512}
initial: {x0: 0.1, v0: 1.5}
mortality:
  kind: quartic_well
  a: 2
  b: 0.5
  constants: {convexity: 4}
sweep:
  epsilons: [0.3, 0.2, 0.1]
  threads: 2
validate:
  seed: 7
  fault: {kernel_variance_scale: 2}
)");
    CHECK(c.run.model == ModelKind::sexual_renormalized);
    CHECK(c.run.epsilon == 0.1);
    CHECK(c.run.r == 3.0);
    CHECK(c.run.grid.n_points == 512);
    CHECK(c.run.init.v0 == 1.5);
    CHECK(c.run.mortality.kind() == MortalityKind::quartic_well);
    CHECK(c.run.mortality.m(1.0) == doctest::Approx(2.5));
    CHECK(c.run.mortality.constants().convexity == 4.0);
    CHECK(c.sweep.epsilons.size() == 3);
    CHECK(c.sweep.threads == 2u);
    CHECK(c.suite.seed == 7u);
    CHECK(c.suite.kernel_variance_scale == 2.0);
    CHECK(c.suite.base.r == 3.0);
  }

  TEST_CASE("invalid documents are config errors") {
    CHECK(parse_error("epsilon: [1") == ErrorKind::config_invalid);
    CHECK(parse_error("epsilonn: 0.1") == ErrorKind::config_invalid);
    CHECK(parse_error("grid: {n_pts: 3}") == ErrorKind::config_invalid);
    CHECK(parse_error("epsilon: abc") == ErrorKind::config_invalid);
    CHECK(parse_error("model: clonal") == ErrorKind::config_invalid);
    CHECK(parse_error("mortality: {kind: cubic}") == ErrorKind::config_invalid);
    CHECK(parse_error("mortality: {kind: tabulated, x_start: 0, step: 1, values: [0, 1, 4, 9]}") ==
          ErrorKind::config_invalid);
    CHECK(parse_error("sweep: {epsilons: [0.1, 0.2, 0.3]}") == ErrorKind::config_invalid);
    CHECK(parse_error("sweep: {epsilons: [0.2, 0.1]}") == ErrorKind::config_invalid);
    CHECK(parse_error("sweep: {beta: 2.5}") == ErrorKind::config_invalid);
    CHECK(parse_error("validate: {fault: {kernel_variance_scale: 0}}") == ErrorKind::config_invalid);
    CHECK(parse_error("contrast: {selection: [1]}") == ErrorKind::config_invalid);
    CHECK(parse_error("[1, 2]") == ErrorKind::config_invalid);
    CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), Error);
  }

  TEST_CASE("tabulated mortality with constants") {
    const AppConfig c = parse_config(R"(
mortality:
  kind: tabulated
  x_start: -3
  step: 1
  values: [9, 4, 1, 0, 1, 4, 9]
  constants: {window_half_width: 0.5, convexity: 1.5, growth_constant: 2, growth_exponent: 1}
)");
    CHECK(c.run.mortality.kind() == MortalityKind::tabulated);
    CHECK(c.run.mortality.m(0.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(c.run.mortality.constants().window_half_width == 0.5);
  }
}
