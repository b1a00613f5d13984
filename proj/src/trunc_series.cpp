#include "ttestab/trunc_series.hpp"

#include <cmath>

#include "ttestab/errors.hpp"

namespace ttestab {

TruncSeries pair_coefficients(double C, double D, double theta0, int n) {
  if (!std::isfinite(C) || !std::isfinite(D) || !std::isfinite(theta0)) {
    throw validation_error("pair_coefficients: non-finite input (C, D or theta0)");
  }
  if (n < 1) {
    throw validation_error("pair_coefficients: order must be >= 1, got " + std::to_string(n));
  }
  TruncSeries s;
  s.theta0 = theta0;
  s.order = n;
  s.coeffs.resize(static_cast<std::size_t>(n) + 1);
  const double half_pi = std::acos(-1.0) / 2.0;
  double factorial = 1.0;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) factorial *= k;
    const double phase = theta0 + k * half_pi;
    s.coeffs[static_cast<std::size_t>(k)] =
        (C * std::sin(phase) + D * std::cos(phase)) / factorial;
  }
  return s;
}

double eval_series(const TruncSeries& s, double x) {
  if (!std::isfinite(x)) {
    throw validation_error("eval_series: non-finite evaluation point");
  }
  double acc = 0.0;
  for (int k = s.order; k >= 0; --k) {
    acc = acc * x + s.coeffs[static_cast<std::size_t>(k)];
  }
  return acc;
}

double eval_series_deviation(const TruncSeries& s, double x) {
  double acc = 0.0;
  for (int k = s.order; k >= 1; --k) {
    acc = acc * x + s.coeffs[static_cast<std::size_t>(k)];
  }
  return acc * x;
}

}  // namespace ttestab
