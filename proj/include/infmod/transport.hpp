#pragma once

#include "infmod/grid.hpp"
#include "infmod/operators.hpp"

namespace infmod {

// Both distances treat a grid density as the measure whose cell masses are
// the trapezoid masses, spread uniformly over each cell. Under that reading
// the CDF is piecewise linear through the nodes and the quantile function is
// piecewise linear in p, so both integrals below are evaluated exactly.

/// W1 = int |F_a - F_b| dx.
double wasserstein1(const Density& a, const Density& b);

/// W2 = (int_0^1 |Q_a(p) - Q_b(p)|^2 dp)^{1/2}, integrated piece by piece
/// over the merged breakpoints of the two quantile functions.
double wasserstein2(const Density& a, const Density& b);

/// First moment of a normalized density (trapezoid).
double mean_of(const Density& d);

struct ContractionResult {
  double lhs = 0.0;       ///< W2(T~a, T~b)
  double rhs = 0.0;       ///< sqrt(W2(a,b)^2 / 2 + (mean_a - mean_b)^2 / 2)
  double w2_input = 0.0;  ///< W2(a, b)
  double mean_gap = 0.0;  ///< |mean_a - mean_b|
  bool pass = false;      ///< lhs <= rhs + 1e-6
};

inline constexpr double kContractionSlack = 1e-6;

/// Contraction of W2 under the mixing operator. For pairs with equal means
/// the right-hand side is W2(a, b) / sqrt(2); a mean gap contributes without
/// contraction (translating both inputs translates both outputs).
ContractionResult contraction_check(const Density& a, const Density& b,
                                    const SegregationKernel& kernel);
ContractionResult contraction_check(const Density& a, const Density& b,
                                    const MixingOperator& op);

}  // namespace infmod
