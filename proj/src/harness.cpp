#include "infmod/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "infmod/error.hpp"

namespace infmod {

double record_field(const SweepRecord& rec, const std::string& field) {
  if (field == "sup_W1") return rec.sup_W1;
  if (field == "sup_mean_err") return rec.sup_mean_err;
  if (field == "sup_var_err") return rec.sup_var_err;
  if (field == "sup_high_moment_ratio") return rec.sup_high_moment_ratio;
  if (field == "rho_err") return rec.rho_err;
  throw Error(ErrorKind::precondition, "unknown sweep field '" + field + "'");
}

SweepRecord summarize(const Trajectory& traj, double beta, double t_star_factor) {
  const RunConfig& cfg = traj.config;
  const double eps = cfg.epsilon;
  const double eps2 = eps * eps;
  const double t_star = t_star_factor * eps2 / cfg.r;
  const double t_rho = std::pow(eps, beta);
  const double scale = std::pow(eps, 2 * cfg.k0);

  SweepRecord rec;
  rec.epsilon = eps;
  for (const TrajectorySample& s : traj.samples) {
    rec.sup_W1 = std::max(rec.sup_W1, s.w1_to_ansatz);
    rec.sup_mean_err = std::max(rec.sup_mean_err, std::abs(s.moments.mean - s.mean_path));
    if (s.t >= t_star) rec.sup_var_err = std::max(rec.sup_var_err, std::abs(s.moments.c(2) - eps2));
    rec.sup_high_moment_ratio =
        std::max(rec.sup_high_moment_ratio, s.moments.c(2 * cfg.k0) / scale);
    if (s.t >= t_rho) {
      const double target = rho_limit_at(cfg.mortality, s.mean_limit, cfg.r, cfg.kappa);
      rec.rho_err = std::max(rec.rho_err, std::abs(s.rho - target));
    }
  }
  rec.max_mass_drift = traj.max_mass_drift;
  rec.invariants_ok = traj.positivity_ok && traj.floor_ok && traj.ceiling_ok && traj.l1_ok;
  return rec;
}

std::vector<SweepRecord> run_sweep(const RunConfig& base, const SweepSettings& settings) {
  const auto& eps = settings.epsilons;
  if (eps.size() < 3) throw Error(ErrorKind::precondition, "a sweep needs at least 3 epsilons");
  for (std::size_t i = 1; i < eps.size(); ++i) {
    if (!(eps[i] < eps[i - 1])) {
      throw Error(ErrorKind::precondition, "sweep epsilons must be strictly decreasing");
    }
  }

  std::vector<SweepRecord> out(eps.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < eps.size(); i = next++) {
      RunConfig cfg = base;
      cfg.epsilon = eps[i];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        out[i] = summarize(simulate(cfg), settings.beta, settings.t_star_factor);
      } catch (const Error& e) {
        out[i] = SweepRecord{};
        out[i].ok = false;
        out[i].error = e.what();
      } catch (const std::exception& e) {
        out[i] = SweepRecord{};
        out[i].ok = false;
        out[i].error = std::string("unexpected: ") + e.what();
      }
      out[i].epsilon = eps[i];
      out[i].runtime_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };

  unsigned threads = settings.threads == 0 ? std::thread::hardware_concurrency() : settings.threads;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(eps.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

RateFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::precondition, "fit arrays differ in length");
  if (x.size() < 3) throw Error(ErrorKind::insufficient_samples, "a rate fit needs 3 points");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw Error(ErrorKind::nonpositive_values, "log-log fit of nonpositive values");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorKind::precondition, "rate fit needs distinct epsilons");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  fit.points = n;
  return fit;
}

RateFit fit_rate(const std::vector<SweepRecord>& records, const std::string& field) {
  std::vector<double> x, y;
  for (const auto& r : records) {
    if (!r.ok) continue;
    x.push_back(r.epsilon);
    y.push_back(record_field(r, field));
  }
  return fit_loglog(x, y);
}

std::vector<SweepRecord> drop_largest(const std::vector<SweepRecord>& records, std::size_t count) {
  std::vector<SweepRecord> sorted = records;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SweepRecord& a, const SweepRecord& b) { return a.epsilon > b.epsilon; });
  if (count >= sorted.size()) return {};
  return {sorted.begin() + static_cast<std::ptrdiff_t>(count), sorted.end()};
}

std::vector<NamedFit> fit_all(const std::vector<SweepRecord>& records) {
  std::vector<NamedFit> out;
  const std::vector<SweepRecord> trimmed = drop_largest(records, 2);
  for (const char* window : {"all", "drop_largest_2"}) {
    const auto& recs = std::string(window) == "all" ? records : trimmed;
    for (const auto& field : kRateFields) {
      NamedFit nf{field, window, {}, true, {}};
      try {
        nf.fit = fit_rate(recs, field);
      } catch (const Error& e) {
        nf.ok = false;
        nf.error = e.what();
      }
      out.push_back(std::move(nf));
    }
  }
  return out;
}

}  // namespace infmod
