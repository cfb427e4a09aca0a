#include "infmod/residuals.hpp"

#include <algorithm>
#include <cmath>

#include "infmod/error.hpp"

namespace infmod {

namespace {

struct Series {
  std::vector<double> t;
  std::vector<const TrajectorySample*> s;
  double spacing = 0.0;
};

Series uniform_samples(const Trajectory& traj) {
  Series out;
  const auto& smp = traj.samples;
  if (smp.size() < kMinResidualSamples) {
    throw Error(ErrorKind::insufficient_samples, "moment residuals need at least 5 samples");
  }
  out.spacing = smp[1].t - smp[0].t;
  for (std::size_t i = 0; i < smp.size(); ++i) {
    // A short trailing interval (t_end not on the stride) is dropped.
    if (i > 0 && std::abs((smp[i].t - smp[i - 1].t) - out.spacing) > 1e-9 * out.spacing) break;
    out.t.push_back(smp[i].t);
    out.s.push_back(&smp[i]);
  }
  if (out.t.size() < kMinResidualSamples) {
    throw Error(ErrorKind::insufficient_samples, "fewer than 5 uniformly spaced samples");
  }
  return out;
}

// |D_h - D_2h| per sample; where the wide stencil does not fit the nearest
// available estimate is reused.
std::vector<double> richardson_gap(const std::vector<double>& y, double h) {
  const std::size_t n = y.size();
  const std::vector<double> d = sample_derivative(y, h);
  std::vector<double> gap(n, -1.0);
  for (std::size_t i = 0; i < n; ++i) {
    double wide;
    if (i >= 2 && i + 2 < n) {
      wide = (y[i + 2] - y[i - 2]) / (4.0 * h);
    } else if (i < 2 && i + 4 < n) {
      wide = (-3.0 * y[i] + 4.0 * y[i + 2] - y[i + 4]) / (4.0 * h);
    } else if (i + 2 >= n && i >= 4) {
      wide = (3.0 * y[i] - 4.0 * y[i - 2] + y[i - 4]) / (4.0 * h);
    } else {
      continue;
    }
    gap[i] = std::abs(d[i] - wide);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (gap[i] >= 0.0) continue;
    for (std::size_t k = 1; k < n; ++k) {
      if (i >= k && gap[i - k] >= 0.0) { gap[i] = gap[i - k]; break; }
      if (i + k < n && gap[i + k] >= 0.0) { gap[i] = gap[i + k]; break; }
    }
    if (gap[i] < 0.0) gap[i] = 0.0;
  }
  return gap;
}

struct RawResiduals {
  Series series;
  std::vector<ResidualRow> rows;
  std::vector<double> gap1;
  std::vector<double> gap2;
  double form_gap = 0.0;
};

enum class Model { sexual, asexual };

RawResiduals raw_residuals(const Trajectory& traj, Model model) {
  RawResiduals out;
  out.series = uniform_samples(traj);
  const auto& ser = out.series;
  const std::size_t n = ser.t.size();
  const RunConfig& cfg = traj.config;
  const double eps = cfg.epsilon;
  const MortalitySpec& m = cfg.mortality;

  std::vector<double> m1(n), m2(n);
  for (std::size_t i = 0; i < n; ++i) {
    m1[i] = ser.s[i]->moments.mean;
    m2[i] = ser.s[i]->moments.c(2);
  }
  const std::vector<double> d1 = sample_derivative(m1, ser.spacing);
  const std::vector<double> d2 = sample_derivative(m2, ser.spacing);
  out.gap1 = richardson_gap(m1, ser.spacing);
  out.gap2 = richardson_gap(m2, ser.spacing);

  const double scale = model == Model::sexual ? eps * eps : eps;
  for (double& g : out.gap1) g *= scale;
  for (double& g : out.gap2) g *= scale;

  out.rows.resize(n);
  if (model == Model::sexual) {
    for (std::size_t i = 0; i < n; ++i) {
      const TrajectorySample& s = *ser.s[i];
      if (!s.remainders) {
        throw Error(ErrorKind::precondition, "trajectory was recorded without remainders");
      }
      const RemainderTerms& f = *s.remainders;
      ResidualRow& row = out.rows[i];
      row.t = ser.t[i];
      row.f1_exact = f.f1_exact;
      row.f1_bound = f.f1_bound;
      row.f2_exact = f.f2_exact;
      row.f2_bound = f.f2_bound;
      row.r1 = scale * d1[i] + m.m_prime(m1[i]) * m2[i] + f.f1_exact;
      row.r2 = scale * d2[i] + 0.5 * cfg.r * m2[i] - 0.5 * cfg.r * eps * eps - f.f2_exact;
      out.form_gap = std::max({out.form_gap, std::abs(f.f1_exact - f.f1_direct),
                               std::abs(f.f2_exact - f.f2_direct)});
    }
  } else {
    const double s_coef = m.quadratic_coefficient();
    const double p = cfg.asexual.mutation_rate;
    const double sigma = cfg.asexual.kernel(eps).base_variance();
    for (std::size_t i = 0; i < n; ++i) {
      const MomentVector& mv = ser.s[i]->moments;
      ResidualRow& row = out.rows[i];
      row.t = ser.t[i];
      const double M3 = mv.c(3), M4 = mv.c(4);
      row.f1_exact = s_coef * M3;
      row.r1 = scale * d1[i] + m.m_prime(m1[i]) * m2[i] + s_coef * M3;
      row.r2 = scale * d2[i] - p * sigma * eps * eps + s_coef * M4 +
               2.0 * s_coef * M3 * m1[i] - s_coef * m2[i] * m2[i];
    }
  }
  return out;
}

ResidualReport finish(const Trajectory& traj, const Trajectory* half_step, Model model) {
  RawResiduals coarse = raw_residuals(traj, model);
  RawResiduals fine_storage;
  const RawResiduals* fine = &coarse;
  if (half_step) {
    fine_storage = raw_residuals(*half_step, model);
    fine = &fine_storage;
    if (fine->rows.size() != coarse.rows.size()) {
      throw Error(ErrorKind::precondition, "half-step trajectory has different sample times");
    }
    for (std::size_t i = 0; i < coarse.rows.size(); ++i) {
      const double t = coarse.rows[i].t;
      if (std::abs(fine->rows[i].t - t) > 1e-9 * std::max(1.0, t)) {
        throw Error(ErrorKind::precondition, "half-step trajectory has different sample times");
      }
    }
  }

  ResidualReport rep;
  rep.rows = fine->rows;
  rep.max_form_gap = fine->form_gap;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    ResidualRow& row = rep.rows[i];
    row.tol1 = fine->gap1[i] + kResidualFloor;
    row.tol2 = fine->gap2[i] + kResidualFloor;
    if (half_step) {
      row.tol1 += std::abs(coarse.rows[i].r1 - row.r1);
      row.tol2 += std::abs(coarse.rows[i].r2 - row.r2);
    }
    rep.max_r1 = std::max(rep.max_r1, std::abs(row.r1));
    rep.max_r2 = std::max(rep.max_r2, std::abs(row.r2));
    rep.max_tol1 = std::max(rep.max_tol1, row.tol1);
    rep.max_tol2 = std::max(rep.max_tol2, row.tol2);
    if (row.f1_bound > 0.0) rep.fitted_c1 = std::max(rep.fitted_c1, std::abs(row.f1_exact) / row.f1_bound);
    if (row.f2_bound > 0.0) rep.fitted_c2 = std::max(rep.fitted_c2, std::abs(row.f2_exact) / row.f2_bound);
  }
  (void)traj;
  return rep;
}

}  // namespace

std::vector<double> sample_derivative(const std::vector<double>& y, double spacing) {
  const std::size_t n = y.size();
  if (n < 3) throw Error(ErrorKind::insufficient_samples, "derivative needs 3 samples");
  std::vector<double> d(n);
  d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * spacing);
  d[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * spacing);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i - 1]) / (2.0 * spacing);
  return d;
}

ResidualReport moment_ode_residuals(const Trajectory& traj, const Trajectory* half_step) {
  if (traj.config.model == ModelKind::asexual_full) {
    throw Error(ErrorKind::precondition, "use asexual_moment_residuals for the asexual model");
  }
  return finish(traj, half_step, Model::sexual);
}

ResidualReport asexual_moment_residuals(const Trajectory& traj, const Trajectory* half_step) {
  if (traj.config.model != ModelKind::asexual_full) {
    throw Error(ErrorKind::precondition, "asexual residuals need an asexual trajectory");
  }
  return finish(traj, half_step, Model::asexual);
}

}  // namespace infmod
