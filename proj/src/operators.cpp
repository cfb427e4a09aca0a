#include "infmod/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "infmod/error.hpp"

namespace infmod {

SegregationKernel::SegregationKernel(double epsilon, double width_scale)
    : epsilon_(epsilon), width_(epsilon * width_scale) {
  if (!(epsilon > 0.0) || !(width_scale > 0.0)) {
    throw Error(ErrorKind::precondition, "segregation kernel needs epsilon > 0");
  }
}

double SegregationKernel::operator()(double x) const noexcept {
  const double u = x / width_;
  return std::exp(-u * u) / (width_ * std::sqrt(std::numbers::pi));
}

double SegregationKernel::sup_norm() const noexcept {
  return 1.0 / (width_ * std::sqrt(std::numbers::pi));
}

std::vector<double> SegregationKernel::sample_centred(double step) const {
  const auto K = static_cast<std::size_t>(std::floor(support_half_width() / step));
  std::vector<double> out(2 * K + 1);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double d = static_cast<double>(i) - static_cast<double>(K);
    out[i] = (*this)(d * step);
  }
  return out;
}

MutationKernel::MutationKernel(double epsilon, std::function<double(double)> base,
                               double base_support, double base_variance)
    : epsilon_(epsilon),
      base_(std::move(base)),
      base_support_(base_support),
      base_variance_(base_variance) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::precondition, "mutation kernel needs epsilon > 0");
}

MutationKernel MutationKernel::gaussian(double epsilon, double sd) {
  if (!(sd > 0.0)) throw Error(ErrorKind::precondition, "mutation kernel sd must be positive");
  auto g = [sd](double x) {
    const double u = x / sd;
    return std::exp(-0.5 * u * u) / (sd * std::sqrt(2.0 * std::numbers::pi));
  };
  return MutationKernel(epsilon, g, 12.0 * sd, sd * sd);
}

MutationKernel MutationKernel::tabulated(double epsilon, double half_width,
                                         std::vector<double> values) {
  const std::size_t n = values.size();
  if (n < 5 || n % 2 == 0 || !(half_width > 0.0)) {
    throw Error(ErrorKind::config_invalid,
                "tabulated mutation kernel needs an odd number (>= 5) of values on [-w, w]");
  }
  for (std::size_t i = 0; i < n / 2; ++i) {
    if (std::abs(values[i] - values[n - 1 - i]) > 1e-12) {
      throw Error(ErrorKind::config_invalid, "tabulated mutation kernel is not symmetric");
    }
    if (values[i] < 0.0) throw Error(ErrorKind::config_invalid, "negative mutation kernel value");
  }
  const double step = 2.0 * half_width / static_cast<double>(n - 1);
  // Normalize and take the variance with the same trapezoid rule.
  double mass = 0.0, second = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 * step : step;
    const double x = -half_width + static_cast<double>(i) * step;
    mass += w * values[i];
    second += w * x * x * values[i];
  }
  if (!(mass > 0.0)) throw Error(ErrorKind::config_invalid, "mutation kernel has zero mass");
  for (double& v : values) v /= mass;
  auto spline = std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
      values.begin(), values.end(), -half_width, step, 0.0, 0.0);
  auto g = [spline, half_width](double x) {
    if (std::abs(x) >= half_width) return 0.0;
    return std::max(0.0, (*spline)(x));
  };
  return MutationKernel(epsilon, g, half_width, second / mass);
}

double MutationKernel::operator()(double x) const { return base_(x / epsilon_) / epsilon_; }

std::vector<double> MutationKernel::sample_centred(double step) const {
  const auto K = static_cast<std::size_t>(std::ceil(support_half_width() / step));
  std::vector<double> out(2 * K + 1);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double d = static_cast<double>(i) - static_cast<double>(K);
    out[i] = (*this)(d * step);
  }
  return out;
}

MixingOperator::MixingOperator(const TraitGrid& grid, const SegregationKernel& kernel)
    : grid_(grid),
      kernel_(kernel),
      convolver_(kernel.sample_centred(0.5 * grid.spacing()), grid.size(),
                 KernelConvolver::Mode::self_convolved) {}

std::vector<double> MixingOperator::double_sum(std::span<const double> values) const {
  const std::size_t n = grid_.size();
  std::vector<double> weighted(n);
  for (std::size_t i = 0; i < n; ++i) weighted[i] = grid_.weight(i) * values[i];
  const std::vector<double> lattice = convolver_.apply(weighted);
  std::vector<double> out(n);
  // Round-off from the FFT can leave values of order -1e-18 * max in the tails.
  for (std::size_t i = 0; i < n; ++i) out[i] = std::max(0.0, lattice[2 * i]);
  return out;
}

Density MixingOperator::apply_normalized(const Density& q) const {
  if (!(q.grid() == grid_)) throw Error(ErrorKind::grid_mismatch, "mixing operator");
  require_normalized(q, "apply_T_fast");
  return Density(grid_, double_sum(q.values()));
}

Density MixingOperator::apply_full(const Density& n) const {
  if (!(n.grid() == grid_)) throw Error(ErrorKind::grid_mismatch, "mixing operator");
  if (!(n.mass() > 0.0)) throw Error(ErrorKind::zero_mass, "apply_T_full");
  std::vector<double> out = double_sum(n.values());
  const double inv = 1.0 / n.mass();
  for (double& v : out) v *= inv;
  return Density(grid_, std::move(out));
}

MutationOperator::MutationOperator(const TraitGrid& grid, const MutationKernel& kernel)
    : grid_(grid),
      convolver_(kernel.sample_centred(grid.spacing()), grid.size(),
                 KernelConvolver::Mode::plain) {}

std::vector<double> MutationOperator::convolve(std::span<const double> values) const {
  const std::size_t n = grid_.size();
  std::vector<double> weighted(n);
  for (std::size_t i = 0; i < n; ++i) weighted[i] = grid_.weight(i) * values[i];
  std::vector<double> out = convolver_.apply(weighted);
  for (double& v : out) v = std::max(0.0, v);
  return out;
}

std::vector<double> MutationOperator::apply(const Density& n) const {
  std::vector<double> out = convolve(n.values());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= n[i];
  return out;
}

Density apply_T_reference(const Density& q, const SegregationKernel& kernel) {
  const TraitGrid& grid = q.grid();
  const std::size_t n = grid.size();
  if (n > kReferenceMaxPoints) {
    throw Error(ErrorKind::grid_too_large, "reference operator limited to 256 points");
  }
  require_normalized(q, "apply_T_reference");
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = grid.weight(i) * q[i];
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = grid.node(k);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (a[i] == 0.0) continue;
      double inner = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        inner += a[j] * kernel(x - 0.5 * (grid.node(i) + grid.node(j)));
      }
      acc += a[i] * inner;
    }
    out[k] = acc;
  }
  return Density(grid, std::move(out));
}

Density apply_T_fast(const Density& q, const SegregationKernel& kernel) {
  return MixingOperator(q.grid(), kernel).apply_normalized(q);
}

Density apply_T_full(const Density& n, const SegregationKernel& kernel) {
  return MixingOperator(n.grid(), kernel).apply_full(n);
}

std::vector<double> apply_mutation(const Density& q, const MutationKernel& kernel) {
  return MutationOperator(q.grid(), kernel).apply(q);
}

}  // namespace infmod
