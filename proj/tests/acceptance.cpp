// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
// Usage: infmod_acceptance <path-to-infmod-cli>
// The CLI path is needed for the determinism criterion, which runs the
// `sweep` subcommand twice and compares the CSV bytes.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "infmod/checks.hpp"
#include "infmod/harness.hpp"
#include "infmod/output.hpp"

namespace fs = std::filesystem;
using namespace infmod;

namespace {

struct Criterion {
  int id;
  std::string name;
  bool pass = false;
  std::vector<std::string> details;
};

std::string describe(const CheckResult& c) {
  std::string s = (c.pass ? "ok   " : "FAIL ") + c.name + " value=" + format_double(c.value) +
                  " threshold=" + format_double(c.threshold);
  if (!c.detail.empty()) s += " (" + c.detail + ")";
  return s;
}

void absorb(Criterion& cr, const std::vector<CheckResult>& checks) {
  cr.pass = !checks.empty();
  for (const auto& c : checks) {
    cr.pass = cr.pass && c.pass;
    cr.details.push_back(describe(c));
  }
}

const CheckResult* find(const std::vector<CheckResult>& checks, const std::string& name) {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<CheckResult> pick(const std::vector<CheckResult>& checks,
                              std::initializer_list<const char*> names) {
  std::vector<CheckResult> out;
  for (const char* n : names) {
    if (const CheckResult* c = find(checks, n)) out.push_back(*c);
  }
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sweep_line(const SweepRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "eps=%-5g W1=%.3e mean=%.3e var=%.3e M2k0/eps^2k0=%.1f rho=%.3e drift=%.1e %s",
                r.epsilon, r.sup_W1, r.sup_mean_err, r.sup_var_err, r.sup_high_moment_ratio,
                r.rho_err, r.max_mass_drift, r.ok ? (r.invariants_ok ? "" : "invariants!") : r.error.c_str());
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  std::setvbuf(stdout, nullptr, _IOLBF, 0);

  SuiteConfig suite;
  suite.random_densities = 50;
  suite.contraction_pairs = 100;
  const SweepSettings sweep;
  suite.fixed_point_epsilons = sweep.epsilons;

  std::vector<Criterion> results;
  auto run = [&](int id, const char* name, const std::function<void(Criterion&)>& body) {
    Criterion cr{id, name};
    try {
      body(cr);
    } catch (const std::exception& e) {
      cr.pass = false;
      cr.details.push_back(std::string("exception: ") + e.what());
    }
    std::printf("%s %2d %s\n", cr.pass ? "PASS" : "FAIL", cr.id, cr.name.c_str());
    for (const auto& d : cr.details) std::printf("        %s\n", d.c_str());
    results.push_back(std::move(cr));
  };

  run(1, "operator moment algebra", [&](Criterion& cr) { absorb(cr, check_operator_algebra(suite)); });
  run(2, "operator fixed point", [&](Criterion& cr) { absorb(cr, {check_operator_fixed_point(suite)}); });
  run(3, "reference/fast operator equivalence",
      [&](Criterion& cr) { absorb(cr, {check_reference_fast(suite)}); });

  // Both sexual models over the full epsilon sweep; criteria 4 and 6-8 read them.
  std::vector<SweepRecord> full, renorm;
  {
    RunConfig base = suite.base;
    base.model = ModelKind::sexual_full;
    full = run_sweep(base, sweep);
    base.model = ModelKind::sexual_renormalized;
    renorm = run_sweep(base, sweep);
  }

  run(4, "conservation and positivity", [&](Criterion& cr) {
    double drift = 0.0;
    bool runs_ok = true, invariants = true;
    for (const auto* recs : {&full, &renorm}) {
      for (const auto& r : *recs) {
        runs_ok = runs_ok && r.ok;
        invariants = invariants && r.invariants_ok;
      }
    }
    for (const auto& r : renorm) drift = std::max(drift, r.max_mass_drift);
    absorb(cr, {{"all_runs_completed", runs_ok, runs_ok ? 1.0 : 0.0, 1.0, "14 runs"},
                {"mass_drift_per_step", drift <= 1e-8, drift, 1e-8, "renormalized, pre-projection"},
                {"floor_and_ceilings", invariants, invariants ? 1.0 : 0.0, 1.0,
                 "positivity floor, L1 and pointwise ceilings at every sample"}});
  });

  run(5, "exact variance transient (m = 0)",
      [&](Criterion& cr) { absorb(cr, {check_exact_transient(suite)}); });

  const std::vector<CheckResult> gates = sweep_gates(full);
  run(6, "moment rates", [&](Criterion& cr) {
    absorb(cr, pick(gates, {"sweep_failed_runs", "rate_mean", "rate_variance", "high_moment_spread"}));
    for (const auto& r : full) cr.details.push_back("  " + sweep_line(r));
  });
  run(7, "W1 rate", [&](Criterion& cr) { absorb(cr, pick(gates, {"rate_W1", "rate_W1_r_squared"})); });
  run(8, "population size rate", [&](Criterion& cr) {
    absorb(cr, pick(gates, {"rate_rho"}));
    const auto rg = sweep_gates(renorm);
    for (const auto& c : rg) cr.details.push_back("  renormalized model: " + describe(c));
  });

  run(9, "Tanaka contraction", [&](Criterion& cr) { absorb(cr, {check_tanaka(suite)}); });

  run(10, "asexual contrast", [&](Criterion& cr) {
    absorb(cr, run_asexual_contrast(suite.base, suite.contrast).checks);
  });

  run(11, "determinism of sweep output", [&](Criterion& cr) {
    if (cli.empty()) {
      cr.details.push_back("no CLI path given");
      return;
    }
    const fs::path root = fs::temp_directory_path() / ("infmod_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
    int codes[2];
    for (int k = 0; k < 2; ++k) {
      const fs::path out = root / ("run" + std::to_string(k));
      const std::string cmd = "\"" + cli + "\" sweep --out-dir \"" + out.string() + "\" > \"" +
                              (root / ("log" + std::to_string(k))).string() + "\" 2>&1";
      codes[k] = std::system(cmd.c_str());
    }
    bool same = true;
    for (const char* f : {"sweep.csv", "fits.csv", "sweep_checks.csv"}) {
      const std::string a = slurp(root / "run0" / f), b = slurp(root / "run1" / f);
      const bool eq = !a.empty() && a == b;
      cr.details.push_back(std::string(eq ? "ok   " : "FAIL ") + f + " (" + std::to_string(a.size()) +
                           " bytes)");
      same = same && eq;
    }
    cr.details.push_back("cli exit codes " + std::to_string(codes[0]) + ", " + std::to_string(codes[1]));
    cr.pass = same;
    fs::remove_all(root);
  });

  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
  return failed == 0 ? 0 : 1;
}
