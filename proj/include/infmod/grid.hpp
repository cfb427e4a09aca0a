#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace infmod {

/// Uniform discretization of a truncated trait axis.
///
/// Nodes are exactly `x_min + i * spacing` for i in [0, size). Quadrature
/// everywhere in the library is the composite trapezoid rule on these nodes.
class TraitGrid {
 public:
  TraitGrid(double x_min, double x_max, std::size_t n_points);

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return h_; }

  double node(std::size_t i) const noexcept { return x_min_ + static_cast<double>(i) * h_; }
  /// Trapezoid weight of node i (h, halved at both ends).
  double weight(std::size_t i) const noexcept {
    return (i == 0 || i + 1 == n_) ? 0.5 * h_ : h_;
  }

  std::vector<double> nodes() const;
  bool contains(double x) const noexcept { return x >= x_min_ && x <= x_max_; }

  friend bool operator==(const TraitGrid& a, const TraitGrid& b) noexcept {
    return a.x_min_ == b.x_min_ && a.x_max_ == b.x_max_ && a.n_ == b.n_;
  }

 private:
  double x_min_;
  double x_max_;
  std::size_t n_;
  double h_;
};

inline constexpr std::size_t kMinGridPoints = 16;
inline constexpr double kNegativityTolerance = 1e-12;
inline constexpr double kNormalizationTolerance = 1e-8;

TraitGrid make_grid(double x_min, double x_max, std::size_t n_points);

/// Trapezoid quadrature of a grid function.
double trapezoid(const TraitGrid& grid, std::span<const double> values);

/// Nonnegative grid function (population density n or probability density q).
class Density {
 public:
  /// Throws negativity_violation if any value is below -1e-12.
  Density(TraitGrid grid, std::vector<double> values);

  const TraitGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }
  double mass() const noexcept { return mass_; }

  double max_value() const;
  double min_value() const;
  bool is_normalized(double tol = kNormalizationTolerance) const noexcept;

  /// Same shape scaled by `factor` (factor >= 0).
  Density scaled(double factor) const;

  /// Moves the sample vector out; the density is left empty.
  std::vector<double> release() && { return std::move(values_); }

 private:
  TraitGrid grid_;
  std::vector<double> values_;
  double mass_;
};

double integrate(const Density& d);
Density normalize(const Density& d);

/// Throws not_normalized unless |mass - 1| <= 1e-8.
void require_normalized(const Density& d, const char* who);
void require_same_grid(const Density& a, const Density& b, const char* who);

/// Piecewise-linear CDF on the grid nodes and its generalized inverse.
struct CdfQuantile {
  std::vector<double> cdf;          ///< per node, cdf.front() = 0, cdf.back() = 1
  std::vector<double> probability;  ///< uniform probability grid (cell midpoints, clipped)
  std::vector<double> quantile;     ///< Q(probability[j])

  /// Generalized inverse inf{x : F(x) >= p} with linear interpolation in the cell.
  double quantile_at(double p) const;

  TraitGrid grid;
};

inline constexpr std::size_t kDefaultQuantilePoints = 4096;
inline constexpr double kQuantileClip = 1e-6;

/// Cumulative trapezoid CDF, normalized to end exactly at 1.
std::vector<double> cumulative_cdf(const Density& d);

CdfQuantile cdf_and_quantile(const Density& d,
                             std::size_t n_probability = kDefaultQuantilePoints);

}  // namespace infmod
