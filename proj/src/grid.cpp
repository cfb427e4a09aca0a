#include "infmod/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "infmod/error.hpp"

namespace infmod {

TraitGrid::TraitGrid(double x_min, double x_max, std::size_t n_points)
    : x_min_(x_min), x_max_(x_max), n_(n_points), h_(0.0) {
  if (!(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw Error(ErrorKind::invalid_bounds, "grid requires x_min < x_max");
  }
  if (n_points < kMinGridPoints) {
    throw Error(ErrorKind::invalid_bounds,
                "grid requires at least " + std::to_string(kMinGridPoints) + " points");
  }
  h_ = (x_max - x_min) / static_cast<double>(n_points - 1);
}

std::vector<double> TraitGrid::nodes() const {
  std::vector<double> x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[i] = node(i);
  return x;
}

TraitGrid make_grid(double x_min, double x_max, std::size_t n_points) {
  return TraitGrid(x_min, x_max, n_points);
}

double trapezoid(const TraitGrid& grid, std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  double interior = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) interior += values[i];
  return grid.spacing() * (interior + 0.5 * (values.front() + values.back()));
}

Density::Density(TraitGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)), mass_(0.0) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorKind::grid_mismatch, "density has " + std::to_string(values_.size()) +
                                              " values for a grid of " +
                                              std::to_string(grid_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!(v >= -kNegativityTolerance)) {
      throw Error(ErrorKind::negativity_violation,
                  "value " + std::to_string(v) + " at node " + std::to_string(i));
    }
  }
  mass_ = trapezoid(grid_, values_);
}

double Density::max_value() const { return *std::max_element(values_.begin(), values_.end()); }
double Density::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

bool Density::is_normalized(double tol) const noexcept { return std::abs(mass_ - 1.0) <= tol; }

Density Density::scaled(double factor) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  return Density(grid_, std::move(v));
}

double integrate(const Density& d) { return d.mass(); }

Density normalize(const Density& d) {
  if (!(d.mass() > 0.0)) throw Error(ErrorKind::zero_mass, "cannot normalize");
  if (d.mass() == 1.0) return d;
  return d.scaled(1.0 / d.mass());
}

void require_normalized(const Density& d, const char* who) {
  if (!d.is_normalized()) {
    throw Error(ErrorKind::not_normalized,
                std::string(who) + ": mass " + std::to_string(d.mass()));
  }
}

void require_same_grid(const Density& a, const Density& b, const char* who) {
  if (!(a.grid() == b.grid())) throw Error(ErrorKind::grid_mismatch, who);
}

std::vector<double> cumulative_cdf(const Density& d) {
  const auto v = d.values();
  const double h = d.grid().spacing();
  std::vector<double> F(v.size(), 0.0);
  for (std::size_t i = 1; i < v.size(); ++i) F[i] = F[i - 1] + 0.5 * h * (v[i - 1] + v[i]);
  const double total = F.back();
  if (!(total > 0.0)) throw Error(ErrorKind::zero_mass, "cdf of zero density");
  for (double& f : F) f /= total;
  F.back() = 1.0;
  return F;
}

namespace {

double invert_cdf(const std::vector<double>& F, const TraitGrid& grid, double p) {
  // First node where F >= p; the crossing lies in the cell just before it.
  const auto it = std::lower_bound(F.begin(), F.end(), p);
  if (it == F.begin()) return grid.x_min();
  if (it == F.end()) return grid.x_max();
  const std::size_t i = static_cast<std::size_t>(it - F.begin());
  const double f0 = F[i - 1];
  const double f1 = F[i];
  const double frac = (p - f0) / (f1 - f0);
  return grid.node(i - 1) + frac * grid.spacing();
}

}  // namespace

double CdfQuantile::quantile_at(double p) const { return invert_cdf(cdf, grid, p); }

CdfQuantile cdf_and_quantile(const Density& d, std::size_t n_probability) {
  require_normalized(d, "cdf_and_quantile");
  CdfQuantile out{cumulative_cdf(d), {}, {}, d.grid()};
  out.probability.resize(n_probability);
  out.quantile.resize(n_probability);
  for (std::size_t j = 0; j < n_probability; ++j) {
    const double p = (static_cast<double>(j) + 0.5) / static_cast<double>(n_probability);
    out.probability[j] = std::clamp(p, kQuantileClip, 1.0 - kQuantileClip);
    out.quantile[j] = invert_cdf(out.cdf, d.grid(), out.probability[j]);
  }
  return out;
}

}  // namespace infmod
