#include "infmod/mortality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/tools/minima.hpp>

#include "infmod/error.hpp"

namespace infmod {

struct MortalitySpec::Table {
  double x_start;
  double x_end;
  boost::math::interpolators::cardinal_cubic_b_spline<double> spline;

  void check(double x) const {
    if (x < x_start || x > x_end) {
      throw Error(ErrorKind::out_of_table,
                  "x = " + std::to_string(x) + " outside tabulated mortality range");
    }
  }
};

const char* to_string(MortalityKind kind) {
  switch (kind) {
    case MortalityKind::quadratic: return "quadratic";
    case MortalityKind::quartic_well: return "quartic_well";
    case MortalityKind::double_well: return "double_well";
    case MortalityKind::tabulated: return "tabulated";
    case MortalityKind::constant: return "constant";
  }
  return "unknown";
}

MortalityKind mortality_kind_from_string(const std::string& name) {
  for (auto k : {MortalityKind::quadratic, MortalityKind::quartic_well, MortalityKind::double_well,
                 MortalityKind::tabulated, MortalityKind::constant}) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorKind::config_invalid, "unknown mortality kind '" + name + "'");
}

MortalitySpec::MortalitySpec(MortalityKind kind, std::vector<double> params,
                             HypothesisConstants constants)
    : kind_(kind), params_(std::move(params)), constants_(constants) {}

MortalitySpec MortalitySpec::quadratic(double s, double window_half_width) {
  return MortalitySpec(MortalityKind::quadratic, {s}, {window_half_width, 2.0 * s, 2.0 * s, 1});
}

MortalitySpec MortalitySpec::quartic_well(double a, double b, double window_half_width) {
  if (!(a > 0.0 && b > 0.0)) {
    throw Error(ErrorKind::config_invalid, "quartic well needs a > 0 and b > 0");
  }
  return MortalitySpec(MortalityKind::quartic_well, {a, b},
                       {window_half_width, 2.0 * a, std::max(2.0 * a, 12.0 * b), 2});
}

MortalitySpec MortalitySpec::double_well(double c, double w, double window_half_width) {
  if (!(c > 0.0) || w == 0.0) {
    throw Error(ErrorKind::config_invalid, "double well needs c > 0 and w != 0");
  }
  // m'' = 2c (6x^2 - 6wx + w^2) is a parabola with vertex at w/2; on a window
  // that excludes the vertex its minimum sits at the endpoint facing w.
  const double L = window_half_width;
  const double edge = w > 0.0 ? L : -L;
  const double a0 = 2.0 * c * (6.0 * edge * edge - 6.0 * w * edge + w * w);
  const double am = 2.0 * c * std::max(9.0, 4.0 * w * w);
  return MortalitySpec(MortalityKind::double_well, {c, w}, {L, a0, am, 2});
}

MortalitySpec MortalitySpec::constant(double c) {
  return MortalitySpec(MortalityKind::constant, {c}, {0.7, 0.0, 0.0, 1});
}

MortalitySpec MortalitySpec::tabulated(double x_start, double step, std::vector<double> values,
                                       HypothesisConstants constants) {
  if (values.size() < 4 || !(step > 0.0)) {
    throw Error(ErrorKind::config_invalid, "tabulated mortality needs >= 4 values and step > 0");
  }
  MortalitySpec spec(MortalityKind::tabulated, {x_start, step}, constants);
  const double x_end = x_start + step * static_cast<double>(values.size() - 1);
  spec.table_ = std::make_shared<const Table>(Table{
      x_start, x_end,
      boost::math::interpolators::cardinal_cubic_b_spline<double>(values.begin(), values.end(),
                                                                  x_start, step)});
  spec.params_.insert(spec.params_.end(), values.begin(), values.end());
  return spec;
}

MortalitySpec MortalitySpec::with_constants(HypothesisConstants c) const {
  MortalitySpec copy = *this;
  copy.constants_ = c;
  return copy;
}

double MortalitySpec::m(double x) const {
  switch (kind_) {
    case MortalityKind::quadratic: return params_[0] * x * x;
    case MortalityKind::quartic_well: {
      const double x2 = x * x;
      return params_[0] * x2 + params_[1] * x2 * x2;
    }
    case MortalityKind::double_well: {
      const double d = x * (x - params_[1]);
      return params_[0] * d * d;
    }
    case MortalityKind::tabulated: table_->check(x); return table_->spline(x);
    case MortalityKind::constant: return params_[0];
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double MortalitySpec::m_prime(double x) const {
  switch (kind_) {
    case MortalityKind::quadratic: return 2.0 * params_[0] * x;
    case MortalityKind::quartic_well: return 2.0 * params_[0] * x + 4.0 * params_[1] * x * x * x;
    case MortalityKind::double_well: {
      const double c = params_[0], w = params_[1];
      return 2.0 * c * x * (x - w) * (2.0 * x - w);
    }
    case MortalityKind::tabulated: table_->check(x); return table_->spline.prime(x);
    case MortalityKind::constant: return 0.0;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double MortalitySpec::m_second(double x) const {
  switch (kind_) {
    case MortalityKind::quadratic: return 2.0 * params_[0];
    case MortalityKind::quartic_well: return 2.0 * params_[0] + 12.0 * params_[1] * x * x;
    case MortalityKind::double_well: {
      const double c = params_[0], w = params_[1];
      return 2.0 * c * (6.0 * x * x - 6.0 * w * x + w * w);
    }
    case MortalityKind::tabulated: table_->check(x); return table_->spline.double_prime(x);
    case MortalityKind::constant: return 0.0;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> MortalitySpec::sample(const TraitGrid& grid) const {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = m(grid.node(i));
  return out;
}

double MortalitySpec::quadratic_coefficient() const {
  if (kind_ != MortalityKind::quadratic) {
    throw Error(ErrorKind::precondition, "mortality is not quadratic");
  }
  return params_[0];
}

double eval_m(const MortalitySpec& spec, double x) { return spec.m(x); }
double eval_m_prime(const MortalitySpec& spec, double x) { return spec.m_prime(x); }
double eval_m_second(const MortalitySpec& spec, double x) { return spec.m_second(x); }

HypothesisReport validate_hypotheses(const MortalitySpec& spec, const TraitGrid& grid, double r,
                                     int k0) {
  if (k0 < 1) throw Error(ErrorKind::precondition, "k0 must be >= 1");
  const auto& c = spec.constants();
  const double L = c.window_half_width;
  const int p = c.growth_exponent;
  constexpr double slack = 1e-12;

  HypothesisReport rep;
  rep.h0_nonnegative = true;
  double inf_m = std::numeric_limits<double>::infinity();
  bool h1_convex = true;
  rep.h3 = true;
  rep.bounds_chain = true;
  rep.max_m_window = -std::numeric_limits<double>::infinity();

  const double m0 = spec.m(0.0);
  auto in_window_closed = [&](double x) { return x >= -L && x <= L; };

  // Grid nodes plus the window endpoints, which need not be nodes.
  std::vector<double> xs = grid.nodes();
  for (double x : xs) {
    const double mx = spec.m(x);
    const double m2 = spec.m_second(x);
    inf_m = std::min(inf_m, mx);
    if (mx < -slack) rep.h0_nonnegative = false;
    if (in_window_closed(x)) rep.max_m_window = std::max(rep.max_m_window, mx);
    if (std::abs(x) < L && m2 < c.convexity - slack) h1_convex = false;
    const double ax = std::abs(x);
    const double growth = c.growth_constant * (1.0 + std::pow(ax, p));
    if (std::abs(m2) > growth * (1.0 + slack) + slack) rep.h3 = false;
    const double dm = mx - m0;
    const double upper = c.growth_constant *
                         (0.5 * ax * ax + std::pow(ax, p + 2) / ((p + 1.0) * (p + 2.0)));
    if (dm > upper * (1.0 + 1e-10) + slack) rep.bounds_chain = false;
    if (ax < L && 0.5 * c.convexity * ax * ax > dm * (1.0 + 1e-10) + slack) {
      rep.bounds_chain = false;
    }
  }
  if (grid.contains(-L)) rep.max_m_window = std::max(rep.max_m_window, spec.m(-L));
  if (grid.contains(L)) rep.max_m_window = std::max(rep.max_m_window, spec.m(L));

  // The infimum of m need not sit on a node (x = 0 is not a node of an
  // even-sized symmetric grid): refine every discrete local minimum.
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    const double mi = spec.m(xs[i]);
    if (mi <= spec.m(xs[i - 1]) && mi <= spec.m(xs[i + 1])) {
      const auto best = boost::math::tools::brent_find_minima(
          [&spec](double x) { return spec.m(x); }, xs[i - 1], xs[i + 1],
          std::numeric_limits<double>::digits / 2);
      inf_m = std::min(inf_m, best.second);
    }
  }
  rep.h0_infimum_zero = std::abs(inf_m) <= 1e-10;
  const bool flat_origin = std::abs(spec.m_prime(0.0)) <= 1e-12;
  rep.h1 = flat_origin && h1_convex && c.convexity > 0.0;
  rep.h2 = rep.max_m_window < r;
  rep.eta = r * (1.0 - 2.0 / std::pow(4.0, k0)) - rep.max_m_window;
  rep.eta_positive = rep.eta > 0.0;
  rep.k0_order_ok = k0 > 3 + (p + 1) / 2;

  if (!rep.h0_nonnegative) rep.messages.emplace_back("H0: m takes negative values on the grid");
  if (!rep.h0_infimum_zero) rep.messages.emplace_back("H0: inf m over the grid is not 0");
  if (!flat_origin) rep.messages.emplace_back("H1: m'(0) != 0");
  if (!(h1_convex && c.convexity > 0.0)) {
    rep.messages.emplace_back("H1: m'' < A0 somewhere in the convexity window (or A0 <= 0)");
  }
  if (!rep.h2) rep.messages.emplace_back("H2: max of m on [-L, L] is not below r");
  if (!rep.h3) rep.messages.emplace_back("H3: |m''| exceeds A_m (1 + |x|^p)");
  if (!rep.bounds_chain) rep.messages.emplace_back("growth bounds on m - m(0) violated");
  if (!rep.eta_positive) rep.messages.emplace_back("eta = r(1 - 2/4^k0) - max m <= 0");
  if (!rep.k0_order_ok) {
    rep.messages.emplace_back("k0 = " + std::to_string(k0) + " does not exceed 3 + ceil(p/2) = " +
                              std::to_string(3 + (p + 1) / 2) +
                              "; the a-priori moment bound is not guaranteed");
  }
  return rep;
}

}  // namespace infmod
