#include "infmod/limits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "infmod/error.hpp"

namespace infmod {

MeanPath::MeanPath(std::vector<double> times, std::vector<double> z, std::vector<double> slope,
                   MeanPathVariant variant, bool left_window)
    : times_(std::move(times)),
      z_(std::move(z)),
      slope_(std::move(slope)),
      variant_(variant),
      left_window_(left_window) {
  if (times_.empty() || times_.size() != z_.size() || z_.size() != slope_.size()) {
    throw Error(ErrorKind::precondition, "mean path sample arrays are inconsistent");
  }
}

double MeanPath::at(double t) const {
  const std::size_t n = times_.size();
  if (n == 1 || t <= times_.front()) return z_.front();
  if (t >= times_.back()) {
    if (t > times_.back() * (1.0 + 1e-12) + 1e-12) {
      throw Error(ErrorKind::precondition, "mean path evaluated past its end time");
    }
    return z_.back();
  }
  const double dt = times_[1] - times_[0];
  auto i = static_cast<std::size_t>((t - times_.front()) / dt);
  i = std::min(i, n - 2);
  const double h = times_[i + 1] - times_[i];
  const double s = (t - times_[i]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * z_[i] + h10 * h * slope_[i] + h01 * z_[i + 1] + h11 * h * slope_[i + 1];
}

MeanPath integrate_mean_ode(const MortalitySpec& m, double z0, double t_end, double dt,
                            MeanPathVariant variant) {
  const double L = m.constants().window_half_width;
  if (!(std::abs(z0) < L)) {
    throw Error(ErrorKind::precondition, "mean ODE start outside the convexity window");
  }
  if (!(dt > 0.0) || !(t_end >= 0.0)) {
    throw Error(ErrorKind::precondition, "mean ODE needs dt > 0 and t_end >= 0");
  }
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-12));
  const double h = steps == 0 ? 0.0 : t_end / static_cast<double>(steps);
  auto f = [&m](double z) { return -m.m_prime(z); };

  std::vector<double> t(steps + 1), z(steps + 1), slope(steps + 1);
  bool left = false;
  t[0] = 0.0;
  z[0] = z0;
  slope[0] = f(z0);
  for (std::size_t i = 0; i < steps; ++i) {
    const double y = z[i];
    const double k1 = slope[i];
    const double k2 = f(y + 0.5 * h * k1);
    const double k3 = f(y + 0.5 * h * k2);
    const double k4 = f(y + h * k3);
    z[i + 1] = y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    t[i + 1] = static_cast<double>(i + 1) * h;
    slope[i + 1] = f(z[i + 1]);
    if (!(std::abs(z[i + 1]) < L)) left = true;
  }
  return MeanPath(std::move(t), std::move(z), std::move(slope), variant, left);
}

Density gaussian_density(double center, double sd, const TraitGrid& grid) {
  if (!grid.contains(center)) {
    throw Error(ErrorKind::precondition, "Gaussian center outside the grid");
  }
  if (!(sd >= 4.0 * grid.spacing())) {
    throw Error(ErrorKind::under_resolved,
                "Gaussian width below 4 grid spacings (sd=" + std::to_string(sd) +
                    ", spacing=" + std::to_string(grid.spacing()) + ")");
  }
  std::vector<double> v(grid.size());
  const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * sd);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double u = (grid.node(i) - center) / sd;
    v[i] = norm * std::exp(-0.5 * u * u);
  }
  // Trapezoid is spectrally accurate here; dividing by the quadrature mass
  // only removes domain truncation and rounding.
  const double mass = trapezoid(grid, v);
  for (double& x : v) x /= mass;
  return Density(grid, std::move(v));
}

Density gaussian_profile(double center, double epsilon, const TraitGrid& grid) {
  return gaussian_density(center, epsilon, grid);
}

RhoLimit rho_limit(const MortalitySpec& m, const MeanPath& path, double r, double kappa) {
  RhoLimit out;
  out.times = path.times();
  out.rho.reserve(out.times.size());
  out.nonpositive.reserve(out.times.size());
  for (double z : path.values()) {
    const bool bad = r <= m.m(z);
    out.rho.push_back(rho_limit_at(m, z, r, kappa));
    out.nonpositive.push_back(bad);
    out.any_nonpositive = out.any_nonpositive || bad;
  }
  return out;
}

}  // namespace infmod
