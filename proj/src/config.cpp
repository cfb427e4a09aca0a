#include "infmod/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "infmod/error.hpp"

namespace infmod {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::config_invalid, what); }

// Mapping reader that remembers which keys were consumed, so that anything
// left over can be rejected.
class Section {
 public:
  // A missing key arrives as an invalid node; treat it as an empty section.
  Section(const YAML::Node& node, std::string path)
      : node_(node.IsDefined() ? node : YAML::Node()), path_(std::move(path)) {
    if (node_.IsDefined() && !node_.IsNull() && !node_.IsMap()) {
      invalid(label() + ": expected a mapping");
    }
  }

  bool has(const std::string& key) const {
    return node_.IsMap() && node_[key].IsDefined() && !node_[key].IsNull();
  }

  // Lookups go through the const node so that missing keys are never inserted.
  YAML::Node at(const std::string& key) const { return node_[key]; }

  template <class T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!has(key)) return;
    try {
      out = at(key).as<T>();
    } catch (const YAML::Exception&) {
      invalid(key_path(key) + ": wrong type");
    }
  }

  Section child(const std::string& key) {
    seen_.insert(key);
    return Section(node_.IsMap() ? at(key) : YAML::Node(), key_path(key));
  }

  void finish() const {
    if (!node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key)) invalid("unknown key '" + key_path(key) + "'");
    }
  }

  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  std::string label() const { return path_.empty() ? "config" : path_; }

  const YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_grid(Section sec, GridSpec& g) {
  sec.get("x_min", g.x_min);
  sec.get("x_max", g.x_max);
  sec.get("n_points", g.n_points);
  sec.finish();
}

HypothesisConstants read_constants(Section sec, HypothesisConstants c) {
  sec.get("window_half_width", c.window_half_width);
  sec.get("convexity", c.convexity);
  sec.get("growth_constant", c.growth_constant);
  sec.get("growth_exponent", c.growth_exponent);
  sec.finish();
  return c;
}

MortalitySpec read_mortality(Section sec) {
  std::string kind = "quadratic";
  sec.get("kind", kind);
  const MortalityKind k = mortality_kind_from_string(kind);
  try {
    MortalitySpec spec = MortalitySpec::quadratic(1.0);
    switch (k) {
      case MortalityKind::quadratic: {
        double s = 1.0, L = 0.7;
        sec.get("s", s);
        sec.get("window_half_width", L);
        spec = MortalitySpec::quadratic(s, L);
        break;
      }
      case MortalityKind::quartic_well: {
        double a = 1.0, b = 1.0, L = 0.7;
        sec.get("a", a);
        sec.get("b", b);
        sec.get("window_half_width", L);
        spec = MortalitySpec::quartic_well(a, b, L);
        break;
      }
      case MortalityKind::double_well: {
        double c = 1.0, w = 1.0, L = 0.2;
        sec.get("c", c);
        sec.get("w", w);
        sec.get("window_half_width", L);
        spec = MortalitySpec::double_well(c, w, L);
        break;
      }
      case MortalityKind::constant: {
        double c = 0.0;
        sec.get("c", c);
        spec = MortalitySpec::constant(c);
        break;
      }
      case MortalityKind::tabulated: {
        double x_start = 0.0, step = 0.0;
        std::vector<double> values;
        sec.get("x_start", x_start);
        sec.get("step", step);
        sec.get("values", values);
        if (!sec.has("constants")) invalid("mortality.constants is required for a tabulated kind");
        const HypothesisConstants c = read_constants(sec.child("constants"), {});
        spec = MortalitySpec::tabulated(x_start, step, std::move(values), c);
        break;
      }
    }
    if (k != MortalityKind::tabulated && sec.has("constants")) {
      spec = spec.with_constants(read_constants(sec.child("constants"), spec.constants()));
    }
    sec.finish();
    return spec;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::config_invalid) throw;
    invalid(std::string("mortality: ") + e.what());
  }
}

void check_epsilons(const std::vector<double>& eps, const std::string& where) {
  if (eps.size() < 3) invalid(where + ": at least 3 values are required");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) invalid(where + ": values must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1])) invalid(where + ": values must be strictly decreasing");
  }
}

}  // namespace

AppConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    invalid(std::string("YAML syntax: ") + e.what());
  }
  AppConfig app;
  RunConfig& run = app.run;
  Section top(root, "");

  std::string model = to_string(run.model);
  top.get("model", model);
  run.model = model_kind_from_string(model);
  top.get("epsilon", run.epsilon);
  top.get("r", run.r);
  top.get("kappa", run.kappa);
  top.get("t_end", run.t_end);
  top.get("dt_factor", run.dt_factor);
  top.get("fixed_steps", run.fixed_steps);
  top.get("output_stride", run.output_stride);
  top.get("k0", run.k0);
  top.get("c1", run.c1);
  top.get("require_hypotheses", run.require_hypotheses);
  top.get("store_densities", run.store_densities);
  top.get("record_remainders", run.record_remainders);

  read_grid(top.child("grid"), run.grid);
  {
    Section s = top.child("initial");
    s.get("x0", run.init.x0);
    s.get("v0", run.init.v0);
    s.get("rho0", run.init.rho0);
    s.finish();
  }
  run.mortality = read_mortality(top.child("mortality"));
  {
    Section s = top.child("asexual");
    s.get("mutation_rate", run.asexual.mutation_rate);
    s.get("kernel_sd", run.asexual.kernel_sd);
    s.get("kernel_table", run.asexual.kernel_table);
    s.get("kernel_table_half_width", run.asexual.kernel_table_half_width);
    s.finish();
    if (!run.asexual.kernel_table.empty()) {
      try {
        (void)run.asexual.kernel(1.0);
      } catch (const Error& e) {
        invalid(std::string("asexual: ") + e.what());
      }
    }
  }
  {
    Section s = top.child("sweep");
    s.get("epsilons", app.sweep.epsilons);
    s.get("beta", app.sweep.beta);
    s.get("t_star_factor", app.sweep.t_star_factor);
    s.get("threads", app.sweep.threads);
    s.finish();
    check_epsilons(app.sweep.epsilons, "sweep.epsilons");
    if (!(app.sweep.beta > 1.0 && app.sweep.beta < 2.0)) invalid("sweep.beta must lie in (1, 2)");
    if (!(app.sweep.t_star_factor >= 0.0)) invalid("sweep.t_star_factor must be >= 0");
  }
  {
    Section s = top.child("contrast");
    ContrastSettings& c = app.contrast;
    s.get("epsilon", c.epsilon);
    read_grid(s.child("grid"), c.grid);
    s.get("selection", c.selection);
    s.get("t_end", c.t_end);
    s.get("sexual_stride", c.sexual_stride);
    s.get("min_difference", c.min_difference);
    s.get("locking_band", c.locking_band);
    s.get("residual_factor", c.residual_factor);
    s.finish();
    if (c.selection.size() < 2) invalid("contrast.selection needs at least two values");
    for (double v : c.selection) {
      if (!(v > 0.0)) invalid("contrast.selection values must be positive");
    }
    if (!(c.epsilon > 0.0) || !(c.t_end > 0.0)) invalid("contrast.epsilon and t_end must be positive");
    if (c.sexual_stride < 1) invalid("contrast.sexual_stride must be >= 1");
  }
  {
    Section s = top.child("validate");
    SuiteConfig& v = app.suite;
    s.get("seed", v.seed);
    s.get("random_densities", v.random_densities);
    s.get("contraction_pairs", v.contraction_pairs);
    s.get("operator_epsilon", v.operator_epsilon);
    s.get("fixed_point_epsilons", v.fixed_point_epsilons);
    Section f = s.child("fault");
    f.get("kernel_variance_scale", v.kernel_variance_scale);
    f.finish();
    s.finish();
    if (!(v.operator_epsilon > 0.0)) invalid("validate.operator_epsilon must be positive");
    if (!(v.kernel_variance_scale > 0.0)) invalid("validate.fault.kernel_variance_scale must be positive");
    if (v.random_densities < 1 || v.contraction_pairs < 1) {
      invalid("validate: random_densities and contraction_pairs must be >= 1");
    }
  }
  top.finish();

  app.suite.base = app.run;
  app.suite.contrast = app.contrast;
  return app;
}

AppConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace infmod
