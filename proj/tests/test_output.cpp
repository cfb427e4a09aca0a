#include <cstdlib>
#include <limits>
#include <sstream>
#include <string>

#include "doctest.h"
#include "infmod/output.hpp"

using namespace infmod;

namespace {

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::size_t line_count(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_SUITE("output") {
  TEST_CASE("doubles round-trip") {
    for (double v : {0.1, 1.0 / 3.0, 2.0e-300, -123456.789, 0.0}) {
      CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  }

  TEST_CASE("trajectory and path CSVs") {
    RunConfig c;
    c.t_end = 0.02;
    const Trajectory tr = simulate(c);
    const std::string csv = trajectory_csv(tr);
    CHECK(first_line(csv) == "t,rho,M1,M2c,M4c,M2k0c,W1_to_ansatz,mass_drift,min_value");
    CHECK(line_count(csv) == tr.samples.size() + 1);
    CHECK(first_line(mean_path_csv(tr.mean_path)) == "t,z");
    CHECK(trajectory_csv(tr) == csv);
  }

  TEST_CASE("records, fits and suite rows") {
    SweepRecord ok;
    ok.epsilon = 0.2;
    SweepRecord bad;
    bad.epsilon = 0.1;
    bad.ok = false;
    bad.error = "under-resolved: sd, too small";
    const std::string s = sweep_csv({ok, bad});
    CHECK(first_line(s).rfind("epsilon,sup_W1,sup_mean_err,sup_var_err,sup_high_moment_ratio,rho_err", 0) == 0);
    CHECK(s.find("runtime") == std::string::npos);
    CHECK(s.find("\"under-resolved: sd, too small\"") != std::string::npos);
    CHECK(first_line(timings_csv({ok})) == "epsilon,runtime_seconds");

    const std::string suite = suite_csv({{"kernel_moments", true, 1e-12, 1e-9, ""}});
    CHECK(suite == "check_name,pass,value,threshold\nkernel_moments,true,9.9999999999999998e-13,1.0000000000000001e-09\n");

    NamedFit f{"sup_W1", "all", {1.0, 0.5, 0.99, 5}, true, {}};
    CHECK(fits_csv({f}).find("sup_W1,all,1,0.5,0.98999999999999999,5,ok") != std::string::npos);
  }

  TEST_CASE("svg plot") {
    PlotSeries a{"errors", {0.4, 0.2, 0.1}, {1e-2, 3e-3, 0.0}};
    const std::string svg = svg_line_plot({a}, {"title <x>", "eps", "err", true, true});
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("title &lt;x&gt;") != std::string::npos);
    CHECK(svg.find("nan") == std::string::npos);
  }
}
