#pragma once

#include <memory>
#include <string>
#include <vector>

#include "infmod/grid.hpp"

namespace infmod {

enum class MortalityKind { quadratic, quartic_well, double_well, tabulated, constant };

const char* to_string(MortalityKind kind);
MortalityKind mortality_kind_from_string(const std::string& name);

/// Constants of the structural hypotheses on m.
///
/// `window_half_width` is L (convexity window (-L, L)), `convexity` is A0,
/// `growth_constant` is A_m and `growth_exponent` is the exponent in
/// |m''(x)| <= A_m (1 + |x|^growth_exponent).
struct HypothesisConstants {
  double window_half_width = 0.7;
  double convexity = 2.0;
  double growth_constant = 2.0;
  int growth_exponent = 1;
};

/// Mortality rate m(x) with analytic first and second derivatives.
///
/// Kinds:
///   quadratic     m = s x^2
///   quartic_well  m = a x^2 + b x^4, a, b > 0
///   double_well   m = c x^2 (x - w)^2 (wells at 0 and w, inf = 0)
///   tabulated     cubic B-spline through a uniform table
///   constant      m = c (degenerate, for test models)
class MortalitySpec {
 public:
  static MortalitySpec quadratic(double s, double window_half_width = 0.7);
  static MortalitySpec quartic_well(double a, double b, double window_half_width = 0.7);
  static MortalitySpec double_well(double c, double w, double window_half_width = 0.2);
  static MortalitySpec constant(double c);
  /// Values sampled at x_start + i * step; derivatives come from the spline.
  static MortalitySpec tabulated(double x_start, double step, std::vector<double> values,
                                 HypothesisConstants constants);

  MortalityKind kind() const noexcept { return kind_; }
  const std::vector<double>& parameters() const noexcept { return params_; }
  const HypothesisConstants& constants() const noexcept { return constants_; }
  MortalitySpec with_constants(HypothesisConstants c) const;

  double m(double x) const;
  double m_prime(double x) const;
  double m_second(double x) const;

  /// m sampled at every grid node.
  std::vector<double> sample(const TraitGrid& grid) const;

  /// For quadratic m = s x^2 returns s, otherwise throws precondition.
  double quadratic_coefficient() const;

 private:
  struct Table;

  MortalitySpec(MortalityKind kind, std::vector<double> params, HypothesisConstants constants);

  MortalityKind kind_;
  std::vector<double> params_;
  HypothesisConstants constants_;
  std::shared_ptr<const Table> table_;
};

double eval_m(const MortalitySpec& spec, double x);
double eval_m_prime(const MortalitySpec& spec, double x);
double eval_m_second(const MortalitySpec& spec, double x);

struct HypothesisReport {
  bool h0_nonnegative = false;   ///< m >= 0 on the grid
  bool h0_infimum_zero = false;  ///< min over grid within 1e-10 of 0
  bool h1 = false;               ///< m'(0) = 0 and m'' >= A0 on (-L, L)
  bool h2 = false;               ///< max_{[-L, L]} m < r
  bool h3 = false;               ///< |m''| <= A_m (1 + |x|^p)
  bool bounds_chain = false;     ///< the lower/upper growth bounds on m - m(0)
  double max_m_window = 0.0;
  double eta = 0.0;              ///< r (1 - 2/4^k0) - max_{[-L, L]} m
  bool eta_positive = false;
  bool k0_order_ok = false;      ///< k0 > 3 + ceil(p / 2)
  std::vector<std::string> messages;

  bool h0() const noexcept { return h0_nonnegative && h0_infimum_zero; }
  bool apriori_ok() const noexcept { return eta_positive && k0_order_ok; }
  bool all() const noexcept { return h0() && h1 && h2 && h3 && bounds_chain && apriori_ok(); }
};

/// Numerical check of the hypotheses at grid nodes. Never throws on a
/// failed hypothesis; failures are recorded in the report.
HypothesisReport validate_hypotheses(const MortalitySpec& spec, const TraitGrid& grid, double r,
                                     int k0);

}  // namespace infmod
