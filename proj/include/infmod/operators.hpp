#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "infmod/convolution.hpp"
#include "infmod/grid.hpp"

namespace infmod {

/// Gaussian segregation kernel Gamma_eps(x) = exp(-x^2 / eps^2) / (eps sqrt(pi)).
///
/// Variance eps^2 / 2. `width_scale` multiplies the width (1 for the model
/// kernel; other values only exist for fault injection).
class SegregationKernel {
 public:
  explicit SegregationKernel(double epsilon, double width_scale = 1.0);

  double epsilon() const noexcept { return epsilon_; }
  double width() const noexcept { return width_; }
  double operator()(double x) const noexcept;
  double sup_norm() const noexcept;
  double variance() const noexcept { return 0.5 * width_ * width_; }
  /// Truncation half-width of the sampled kernel (10 eps).
  double support_half_width() const noexcept { return 10.0 * width_; }

  /// Samples at offsets d * step for d = -K..K, K = floor(support / step).
  std::vector<double> sample_centred(double step) const;

 private:
  double epsilon_;
  double width_;
};

/// Mutation kernel G_eps(x) = G(x / eps) / eps for a symmetric base density G.
class MutationKernel {
 public:
  /// Base G = N(0, sd^2).
  static MutationKernel gaussian(double epsilon, double sd = 1.0);
  /// Base G tabulated on the symmetric uniform table [-half_width, half_width]
  /// (odd number of values). Symmetry is checked to 1e-12 and G is renormalized.
  static MutationKernel tabulated(double epsilon, double half_width, std::vector<double> values);

  double epsilon() const noexcept { return epsilon_; }
  double base_variance() const noexcept { return base_variance_; }
  double operator()(double x) const;  ///< G_eps(x)
  double support_half_width() const noexcept { return epsilon_ * base_support_; }
  std::vector<double> sample_centred(double step) const;

 private:
  MutationKernel(double epsilon, std::function<double(double)> base, double base_support,
                 double base_variance);

  double epsilon_;
  std::function<double(double)> base_;
  double base_support_;
  double base_variance_;
};

/// Fast evaluation of the infinitesimal mixing operator on one grid.
///
/// Evaluates exactly the nested trapezoid double sum
///   T[q](x_n) = sum_i sum_j w_i w_j q_i q_j Gamma(x_n - (y_i + y_j) / 2),
/// regrouped by k = i + j: the midparent weights c_k live on the half-spacing
/// lattice x_min + k h / 2, and a second convolution with Gamma sampled at h/2
/// is read back at even lattice points. Both convolutions are done with one
/// FFT pair of size >= 2N + 2K - 1.
class MixingOperator {
 public:
  MixingOperator(const TraitGrid& grid, const SegregationKernel& kernel);

  const TraitGrid& grid() const noexcept { return grid_; }
  const SegregationKernel& kernel() const noexcept { return kernel_; }

  /// Raw double sum without the 1/rho factor; 2-homogeneous in the input.
  std::vector<double> double_sum(std::span<const double> values) const;

  /// T~[q] for a normalized q.
  Density apply_normalized(const Density& q) const;
  /// T[n] = double_sum(n) / mass(n); 1-homogeneous.
  Density apply_full(const Density& n) const;

 private:
  TraitGrid grid_;
  SegregationKernel kernel_;
  KernelConvolver convolver_;
};

/// G_eps * n on one grid (trapezoid), via FFT.
class MutationOperator {
 public:
  MutationOperator(const TraitGrid& grid, const MutationKernel& kernel);

  std::vector<double> convolve(std::span<const double> values) const;
  /// M_eps[n] = G_eps * n - n.
  std::vector<double> apply(const Density& n) const;

 private:
  TraitGrid grid_;
  KernelConvolver convolver_;
};

inline constexpr std::size_t kReferenceMaxPoints = 256;

/// O(N^3) nested trapezoid evaluation; N <= 256.
Density apply_T_reference(const Density& q, const SegregationKernel& kernel);
Density apply_T_fast(const Density& q, const SegregationKernel& kernel);
Density apply_T_full(const Density& n, const SegregationKernel& kernel);
/// Returns the signed grid function G_eps * q - q (integrates to ~0).
std::vector<double> apply_mutation(const Density& q, const MutationKernel& kernel);

}  // namespace infmod
