#pragma once

#include <vector>

#include "infmod/dynamics.hpp"

namespace infmod {

/// Per-sample residuals of the mean and variance equations.
///
/// Sexual model (time scale eps^2):
///   R1 = eps^2 dM1/dt + m'(M1) M2 + F1
///   R2 = eps^2 dM2/dt + (r/2) M2 - r eps^2 / 2 - F2
/// Asexual model with m = s x^2 (time scale eps):
///   R1 = eps dM1/dt + m'(M1) M2 + s M3
///   R2 = eps dM2/dt - p sigma eps^2 + s M4 + 2 s M3 M1 - s M2^2
struct ResidualRow {
  double t = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double f1_exact = 0.0;
  double f1_bound = 0.0;
  double f2_exact = 0.0;
  double f2_bound = 0.0;
  double tol1 = 0.0;  ///< discretization tolerance for R1
  double tol2 = 0.0;
};

struct ResidualReport {
  std::vector<ResidualRow> rows;
  double max_r1 = 0.0;
  double max_r2 = 0.0;
  double max_tol1 = 0.0;
  double max_tol2 = 0.0;
  /// max |F| / bound over the samples (the fitted bound constant).
  double fitted_c1 = 0.0;
  double fitted_c2 = 0.0;
  /// max |F_exact - F_direct| (two quadratures of the same remainder).
  double max_form_gap = 0.0;

  /// sup |R| <= factor * sup tol for both equations.
  bool within(double factor) const noexcept {
    return max_r1 <= factor * max_tol1 && max_r2 <= factor * max_tol2;
  }
};

inline constexpr std::size_t kMinResidualSamples = 5;
inline constexpr double kResidualFloor = 1e-13;

/// Residuals of the sexual moment equations along a trajectory recorded with
/// `record_remainders`. Derivatives are centred differences on the uniformly
/// spaced samples (one-sided second-order stencils at the ends).
///
/// Tolerance per sample = eps^2 |D_h - D_2h| (Richardson estimate of the
/// difference-quotient error) + |R(dt) - R(dt/2)| when `half_step` (the same
/// run with half the time step and twice the stride) is given + 1e-13. When
/// the companion is given, residuals are reported for the finer run.
ResidualReport moment_ode_residuals(const Trajectory& traj,
                                    const Trajectory* half_step = nullptr);

/// Same for the asexual model; requires quadratic mortality.
ResidualReport asexual_moment_residuals(const Trajectory& traj,
                                        const Trajectory* half_step = nullptr);

/// Centred / one-sided second-order derivative of uniformly spaced samples.
std::vector<double> sample_derivative(const std::vector<double>& y, double spacing);

}  // namespace infmod
