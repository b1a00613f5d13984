#pragma once

#include <cstddef>
#include <vector>

namespace ttestab {

/// Truncated Taylor expansion of a sinusoidal coupling term
///   f(x) = C*sin(theta0 + x) + D*cos(theta0 + x)
/// about x = 0, stored as coefficients e_0..e_n of sum_k e_k x^k.
///
/// For the pure-sine case (C=1, D=0) the coefficients reduce to
/// e_k = sin(theta0 + k*pi/2)/k!, which is the per-pair building block of
/// both the single-machine and the multi-machine surrogate models.
struct TruncSeries {
  double theta0 = 0.0;          ///< expansion angle (rad)
  int order = 0;                ///< truncation order n >= 1
  std::vector<double> coeffs;   ///< e_0..e_n, exactly order+1 entries

  /// Constant (equilibrium) term e_0.
  double constant_term() const { return coeffs[0]; }
};

/// Expansion coefficients of C*sin(theta0 + x) + D*cos(theta0 + x) up to
/// order n. Throws validation_error on non-finite inputs or n < 1.
TruncSeries pair_coefficients(double C, double D, double theta0, int n);

/// Horner evaluation of the full series sum_{k=0..n} e_k x^k,
/// highest order first. Throws validation_error for non-finite x.
double eval_series(const TruncSeries& s, double x);

/// Same Horner recursion but skipping e_0, i.e. sum_{k=1..n} e_k x^k.
/// This is the deviation part used by the surrogate right-hand sides.
double eval_series_deviation(const TruncSeries& s, double x);

}  // namespace ttestab
