#include "infmod/transport.hpp"

#include <cmath>

#include "infmod/error.hpp"

namespace infmod {

namespace {

void check_pair(const Density& a, const Density& b, const char* who) {
  require_same_grid(a, b, who);
  require_normalized(a, who);
  require_normalized(b, who);
}

// Q on the cell [cdf[i], cdf[i+1]] (assumed nondegenerate).
double cell_quantile(const std::vector<double>& cdf, const TraitGrid& g, std::size_t i, double p) {
  const double w = cdf[i + 1] - cdf[i];
  return g.node(i) + g.spacing() * (p - cdf[i]) / w;
}

}  // namespace

double mean_of(const Density& d) {
  const TraitGrid& g = d.grid();
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += g.weight(i) * g.node(i) * d[i];
  return s / d.mass();
}

double wasserstein1(const Density& a, const Density& b) {
  check_pair(a, b, "wasserstein1");
  const std::vector<double> fa = cumulative_cdf(a);
  const std::vector<double> fb = cumulative_cdf(b);
  const double h = a.grid().spacing();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < fa.size(); ++i) {
    const double d0 = fa[i] - fb[i];
    const double d1 = fa[i + 1] - fb[i + 1];
    if ((d0 >= 0.0) == (d1 >= 0.0)) {
      total += 0.5 * h * std::abs(d0 + d1);
    } else {
      // Linear difference crossing zero inside the cell.
      total += 0.5 * h * (d0 * d0 + d1 * d1) / (std::abs(d0) + std::abs(d1));
    }
  }
  return total;
}

double wasserstein2(const Density& a, const Density& b) {
  check_pair(a, b, "wasserstein2");
  const TraitGrid& g = a.grid();
  const std::vector<double> fa = cumulative_cdf(a);
  const std::vector<double> fb = cumulative_cdf(b);
  const std::size_t last = fa.size() - 1;

  std::size_t ia = 0, ib = 0;
  double p = 0.0, total = 0.0;
  while (p < 1.0) {
    while (ia + 1 < last && fa[ia + 1] <= p) ++ia;
    while (ib + 1 < last && fb[ib + 1] <= p) ++ib;
    const double next = std::min(fa[ia + 1], fb[ib + 1]);
    if (next <= p) break;  // only reachable through rounding at p ~ 1
    const double d0 = cell_quantile(fa, g, ia, p) - cell_quantile(fb, g, ib, p);
    const double d1 = cell_quantile(fa, g, ia, next) - cell_quantile(fb, g, ib, next);
    total += (next - p) * (d0 * d0 + d0 * d1 + d1 * d1) / 3.0;
    p = next;
  }
  return std::sqrt(total);
}

ContractionResult contraction_check(const Density& a, const Density& b,
                                    const MixingOperator& op) {
  require_same_grid(a, b, "contraction_check");
  const Density ta = op.apply_normalized(a);
  const Density tb = op.apply_normalized(b);
  ContractionResult out;
  out.lhs = wasserstein2(ta, tb);
  out.w2_input = wasserstein2(a, b);
  out.mean_gap = std::abs(mean_of(a) - mean_of(b));
  out.rhs = std::sqrt(0.5 * out.w2_input * out.w2_input + 0.5 * out.mean_gap * out.mean_gap);
  out.pass = out.lhs <= out.rhs + kContractionSlack;
  return out;
}

ContractionResult contraction_check(const Density& a, const Density& b,
                                    const SegregationKernel& kernel) {
  return contraction_check(a, b, MixingOperator(a.grid(), kernel));
}

}  // namespace infmod
