#pragma once

#include <vector>

#include "infmod/grid.hpp"
#include "infmod/mortality.hpp"

namespace infmod {

enum class MeanPathVariant {
  epsilon_initialized,  ///< started from the mean of the initial density
  limit,                ///< started from the nominal trait x0
};

/// Solution of dz/dt = -m'(z) sampled at uniform times.
///
/// Between samples the path is evaluated by cubic Hermite interpolation
/// using the ODE right-hand side as the slope, which keeps the O(dt^4)
/// accuracy of the integrator.
class MeanPath {
 public:
  /// Constant path z = 0 on [0, 0].
  MeanPath() : MeanPath({0.0}, {0.0}, {0.0}, MeanPathVariant::limit, false) {}
  MeanPath(std::vector<double> times, std::vector<double> z, std::vector<double> slope,
           MeanPathVariant variant, bool left_window);

  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<double>& values() const noexcept { return z_; }
  MeanPathVariant variant() const noexcept { return variant_; }
  /// True if the path ever left the convexity window (-L, L).
  bool left_window() const noexcept { return left_window_; }
  double t_end() const noexcept { return times_.back(); }

  double at(double t) const;

 private:
  std::vector<double> times_;
  std::vector<double> z_;
  std::vector<double> slope_;
  MeanPathVariant variant_;
  bool left_window_;
};

inline constexpr double kMeanOdeStep = 1e-3;

/// Classical RK4 with the step shrunk so that t_end is hit exactly.
/// Throws precondition if z0 is outside (-L, L) or dt <= 0.
MeanPath integrate_mean_ode(const MortalitySpec& m, double z0, double t_end,
                            double dt = kMeanOdeStep,
                            MeanPathVariant variant = MeanPathVariant::limit);

/// Normalized Gaussian with standard deviation epsilon sampled on the grid.
/// Throws under_resolved if epsilon < 4 * spacing and precondition if the
/// center lies outside the grid.
Density gaussian_profile(double center, double epsilon, const TraitGrid& grid);

/// Same, with an arbitrary standard deviation `sd` (used for initial data).
Density gaussian_density(double center, double sd, const TraitGrid& grid);

struct RhoLimit {
  std::vector<double> times;
  std::vector<double> rho;
  std::vector<bool> nonpositive;  ///< r <= m(z(t))
  bool any_nonpositive = false;
};

/// rho(t) = (r - m(z(t))) / kappa along a mean path.
RhoLimit rho_limit(const MortalitySpec& m, const MeanPath& path, double r, double kappa);

inline double rho_limit_at(const MortalitySpec& m, double z, double r, double kappa) {
  return (r - m.m(z)) / kappa;
}

}  // namespace infmod
