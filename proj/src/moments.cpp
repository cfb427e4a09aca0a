#include "infmod/moments.hpp"

#include <array>
#include <cmath>
#include <string>

#include "infmod/error.hpp"

namespace infmod {

namespace {

// 8-point Gauss-Legendre on [0, 1]; exact for polynomials of degree <= 15.
constexpr std::array<double, 8> kGlNode = {
    0.019855071751231856, 0.10166676129318664, 0.2372337950418355, 0.4082826787521751,
    0.5917173212478249,   0.7627662049581645,  0.8983332387068134, 0.9801449282487681};
constexpr std::array<double, 8> kGlWeight = {
    0.05061426814518813, 0.11119051722668724, 0.15685332293894363, 0.18134189168918100,
    0.18134189168918100, 0.15685332293894363, 0.11119051722668724, 0.05061426814518813};

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace

double double_factorial(int n) {
  double r = 1.0;
  for (int i = n; i > 1; i -= 2) r *= i;
  return r;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

double MomentVector::c(int k) const {
  if (k < 0 || k > max_order()) {
    throw Error(ErrorKind::order_exceeded, "central moment of order " + std::to_string(k));
  }
  return central[static_cast<std::size_t>(k)];
}

double MomentVector::abs_c(int k) const {
  if (k < 0 || k > max_order()) {
    throw Error(ErrorKind::order_exceeded, "absolute moment of order " + std::to_string(k));
  }
  return abs_central[static_cast<std::size_t>(k)];
}

MomentVector extract_moments(const Density& q, int k0) {
  require_normalized(q, "extract_moments");
  if (k0 < 1) throw Error(ErrorKind::precondition, "k0 must be >= 1");
  const TraitGrid& g = q.grid();
  const std::size_t n = g.size();
  const double inv_mass = 1.0 / q.mass();
  const int order = 2 * k0;

  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += g.weight(i) * g.node(i) * q[i];
  mean *= inv_mass;

  MomentVector mv;
  mv.mean = mean;
  mv.k0 = k0;
  mv.central.assign(static_cast<std::size_t>(order) + 1, 0.0);
  mv.abs_central.assign(static_cast<std::size_t>(order) + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = g.node(i) - mean;
    const double ay = std::abs(y);
    const double wq = g.weight(i) * q[i] * inv_mass;
    double p = wq, ap = wq;
    for (int k = 2; k <= order; ++k) {
      if (k == 2) {
        p = wq * y * y;
        ap = p;
      } else {
        p *= y;
        ap *= ay;
      }
      mv.central[static_cast<std::size_t>(k)] += p;
      mv.abs_central[static_cast<std::size_t>(k)] += ap;
    }
  }
  double abs1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) abs1 += g.weight(i) * std::abs(g.node(i) - mean) * q[i];
  mv.central[0] = 1.0;
  mv.central[1] = 0.0;
  mv.abs_central[0] = 1.0;
  mv.abs_central[1] = abs1 * inv_mass;
  for (int k = 2; k <= order; k += 2) {
    mv.abs_central[static_cast<std::size_t>(k)] = mv.central[static_cast<std::size_t>(k)];
  }

  const double left = ipow(std::abs(g.x_min() - mean), order) * q[0] * inv_mass;
  const double right = ipow(std::abs(g.x_max() - mean), order) * q[n - 1] * inv_mass;
  mv.tail_warning = left > 1e-14 || right > 1e-14;
  return mv;
}

double KernelMoments::even_moment(int l) const {
  if (l < 0 || l > k0()) throw Error(ErrorKind::order_exceeded, "kernel moment order");
  return sigma[static_cast<std::size_t>(l)] * std::pow(epsilon, 2 * l);
}

KernelMoments make_kernel_moments(double epsilon, int k0) {
  KernelMoments km{epsilon, {}};
  for (int l = 0; l <= k0; ++l) km.sigma.push_back(double_factorial(2 * l - 1) / std::pow(2.0, l));
  return km;
}

double kernel_even_moment(int l, double epsilon) {
  if (l < 0) throw Error(ErrorKind::precondition, "negative kernel moment order");
  return double_factorial(2 * l - 1) / std::pow(2.0, l) * std::pow(epsilon, 2 * l);
}

double predict_T_moment(const MomentVector& mv, int k, const KernelMoments& km) {
  if (k < 1 || 2 * k > mv.max_order() || k > km.k0()) {
    throw Error(ErrorKind::order_exceeded, "predict_T_moment order " + std::to_string(2 * k));
  }
  const double quarter_k = std::pow(0.25, k);
  double total = 2.0 * quarter_k * mv.c(2 * k);
  for (int l = 0; l < k; ++l) {
    const double kernel = km.even_moment(k - l);
    const double outer = kernel * std::pow(0.25, l) * binomial(2 * k, 2 * l);
    double inner = 0.0;
    for (int j = 0; j <= 2 * l; ++j) inner += binomial(2 * l, j) * mv.c(2 * l - j) * mv.c(j);
    total += outer * inner;
  }
  for (int j = 2; j <= 2 * k - 2; ++j) {
    total += quarter_k * binomial(2 * k, j) * mv.c(2 * k - j) * mv.c(j);
  }
  return total;
}

double taylor_remainder(const MortalitySpec& m, double X, double x, double spacing) {
  const double d = x - X;
  if (std::abs(d) > spacing * 1e-3) return (m.m(x) - m.m(X) - d * m.m_prime(X)) / (d * d);
  return 0.5 * m.m_second(X);
}

SelectionAverage selection_average(const Density& q, const MortalitySpec& m) {
  require_normalized(q, "selection_average");
  const TraitGrid& g = q.grid();
  const double inv_mass = 1.0 / q.mass();
  double mean = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) mean += g.weight(i) * g.node(i) * q[i];
  mean *= inv_mass;

  double direct = 0.0, remainder = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.node(i);
    const double wq = g.weight(i) * q[i] * inv_mass;
    direct += wq * m.m(x);
    const double y = x - mean;
    remainder += wq * y * y * taylor_remainder(m, mean, x, g.spacing());
  }
  SelectionAverage out{direct, m.m(mean) + remainder};
  const double scale = std::max({std::abs(out.direct), std::abs(m.m(mean)), 1e-300});
  if (std::abs(out.direct - out.decomposed) > 1e-9 * scale) {
    throw Error(ErrorKind::consistency, "selection average decomposition mismatch");
  }
  return out;
}

RemainderTerms remainder_terms(const Density& q, const MomentVector& mv, const MortalitySpec& m) {
  const TraitGrid& g = q.grid();
  const double inv_mass = 1.0 / q.mass();
  const double M = mv.mean;
  const double M2 = mv.c(2);
  const double mpM = m.m_prime(M);

  double f1_taylor = 0.0, f2_taylor = 0.0;
  double m_y = 0.0, m_y2 = 0.0, m_avg = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double wq = g.weight(i) * q[i] * inv_mass;
    if (wq == 0.0) continue;
    const double x = g.node(i);
    const double y = x - M;
    const double y2 = y * y;
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t a = 0; a < kGlNode.size(); ++a) {
      const double s = kGlNode[a];
      const double xi = M + s * y;
      const double m2 = m.m_second(xi);
      s1 += kGlWeight[a] * (1.0 - s) * (m2 * s * y2 * y + 2.0 * (m.m_prime(xi) - mpM) * y2);
      s2 += kGlWeight[a] * (1.0 - s) * m2 * (y2 * y2 - y2 * M2);
    }
    f1_taylor += wq * s1;
    f2_taylor += wq * s2;
    const double mx = m.m(x);
    m_y += wq * mx * y;
    m_y2 += wq * mx * y2;
    m_avg += wq * mx;
  }

  const auto& c = m.constants();
  const int p = c.growth_exponent;
  const double Am = c.growth_constant;
  const double aM = std::abs(M);
  const double aMp = std::pow(aM, p);

  RemainderTerms out;
  out.f1_exact = f1_taylor;
  out.f1_direct = m_y - mpM * M2;
  out.f1_bound = Am * ((1.0 + aMp) * mv.abs_c(3) + mv.abs_c(3 + p));
  out.f2_exact = -(mpM * mv.c(3) + f2_taylor);
  out.f2_direct = m_avg * M2 - m_y2;
  out.f2_bound = Am * ((1.0 + aMp) * (M2 * M2 + mv.c(4)) + (aM + aM * aMp) * mv.abs_c(3) +
                       mv.abs_c(4 + p) + M2 * mv.abs_c(2 + p));
  return out;
}

}  // namespace infmod
