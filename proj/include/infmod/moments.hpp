#pragma once

#include <vector>

#include "infmod/grid.hpp"
#include "infmod/mortality.hpp"

namespace infmod {

/// Mean and central / absolute central moments of a probability density.
///
/// Index k of `central` and `abs_central` holds the moment of order k, for
/// k = 0..2*k0. By convention central[0] = 1 and central[1] = 0 exactly.
struct MomentVector {
  double mean = 0.0;
  std::vector<double> central;
  std::vector<double> abs_central;
  int k0 = 0;
  bool tail_warning = false;

  int max_order() const noexcept { return 2 * k0; }
  double c(int k) const;
  double abs_c(int k) const;
};

/// Quadrature moments; the mean is computed first, then central powers.
/// Sets `tail_warning` when |x - M1|^{2k0} q exceeds 1e-14 at either boundary.
MomentVector extract_moments(const Density& q, int k0);

/// sigma_l = (2l - 1)!! / 2^l, so that the 2l-th moment of Gamma_eps is sigma_l eps^{2l}.
struct KernelMoments {
  double epsilon = 0.0;
  std::vector<double> sigma;  ///< l = 0..k0

  int k0() const noexcept { return static_cast<int>(sigma.size()) - 1; }
  double even_moment(int l) const;
};

KernelMoments make_kernel_moments(double epsilon, int k0);
double kernel_even_moment(int l, double epsilon);

/// Binomial-sum value of the 2k-th central moment (about the input mean) of T~[q]:
///   (2/4^k) M_2k
///   + sum_{l<k} sum_{j<=2l} sigma_{k-l} eps^{2(k-l)} 4^{-l} C(2k,2l) C(2l,j) M_{2l-j} M_j
///   + sum_{j=2}^{2k-2} 4^{-k} C(2k,j) M_{2k-j} M_j.
/// Throws order_exceeded if 2k exceeds the stored moment order or k > kernel k0.
double predict_T_moment(const MomentVector& mv, int k, const KernelMoments& km);

/// Normalized first-order Taylor remainder r^m[X](x); m''(X)/2 when |x - X| <= 1e-3 spacing.
double taylor_remainder(const MortalitySpec& m, double X, double x, double spacing);

struct SelectionAverage {
  double direct;      ///< quadrature of m q
  double decomposed;  ///< m(M1) + quadrature of (x - M1)^2 r^m[M1](x) q
};

/// I = int m q two ways; throws consistency if they differ by more than 1e-9 relative.
SelectionAverage selection_average(const Density& q, const MortalitySpec& m);

/// Remainders of the mean and variance equations at one instant.
///
/// `*_exact` use the Taylor-integral form (Gauss-Legendre in the Taylor
/// parameter, quadrature in x); `*_direct` use the equivalent closed forms
/// F1 = int m (x - M1) q - m'(M1) M2 and F2 = I M2 - int m (x - M1)^2 q;
/// `*_bound` are the growth-hypothesis bounds with unit constant.
struct RemainderTerms {
  double f1_exact = 0.0;
  double f1_direct = 0.0;
  double f1_bound = 0.0;
  double f2_exact = 0.0;
  double f2_direct = 0.0;
  double f2_bound = 0.0;
};

RemainderTerms remainder_terms(const Density& q, const MomentVector& mv, const MortalitySpec& m);

double double_factorial(int n);
double binomial(int n, int k);

}  // namespace infmod
