#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ttestab::smib {

/// Single-machine-infinite-bus swing equation parameters for
///   ddot(delta) + alpha*dot(delta) + beta*(sin(delta) - sin(delta_s)) = 0.
struct SmibParams {
  double delta_s = 0.0;  ///< SEP angle (rad), must lie in (0, pi/2)
  double alpha = 0.0;    ///< damping coefficient D/2H (1/s), >= 0
  double beta = 1.0;     ///< P_max*omega_s/2H (rad/s^2), > 0
};

/// Throws validation_error if the parameter invariants are violated.
void validate(const SmibParams& p);

/// Approximation of the closest unstable equilibrium delta_u1 = pi - delta_s
/// by the order-n surrogate. `exists == false` means the surrogate has no
/// positive real root beyond the SEP, i.e. the approximate UEP vanishes.
struct UepEstimate {
  int order = 0;
  bool exists = false;
  double value = 0.0;  ///< rad; valid only when exists
  double error = 0.0;  ///< value - (pi - delta_s); valid only when exists
};

/// Closed-form UEP approximations, supported for orders 2 and 3 only:
///   order 2: delta_s + 2*cos(delta_s)/sin(delta_s)
///   order 3: delta_s + (sqrt(9 + 15*cos^2(delta_s)) - 3*sin(delta_s))/(2*cos(delta_s))
UepEstimate uep_closed_form(const SmibParams& p, int order);

/// Numeric UEP approximation for orders 2..15: smallest x > 0 with
/// sum_{k=1..n} sin(delta_s + k*pi/2)/k! * x^k = 0, returned as delta_s + x.
/// Root isolation: dense sign-change scan followed by bisection; a touching
/// (even multiplicity) root produces no sign change and is classified as
/// vanished, so the estimate is reported absent there.
UepEstimate uep_numeric(const SmibParams& p, int order);

/// The delta_s value, located by bisection to 1e-4 rad, at which the order-5
/// or order-6 estimate transitions from absent to present.
double existence_threshold(int order);

struct SweepRow {
  double delta_s;
  int order;
  bool exists;
  double value;  ///< rad; valid only when exists
  double error;  ///< value - (pi - delta_s); valid only when exists
};

/// Numeric UEP estimates for every requested order over the grid
/// delta_s = step, 2*step, ... < pi/2. Rows ordered by (delta_s, order).
std::vector<SweepRow> sweep_ueps(const std::vector<int>& orders, double step);

struct OrderingViolation {
  double delta_s;
  std::string detail;
};

/// Outcome of verifying, across the delta_s grid, that order-3/4/7/8
/// estimates increase towards delta_u1 from below while order-2/5/6/9
/// estimates decrease towards it from above (absent estimates skipped).
struct OrderingReport {
  long points_checked = 0;
  std::vector<OrderingViolation> violations;
};

OrderingReport check_ordering(double step);

/// Power-angle curve samples: the exact P_max*sin(delta) alongside its
/// order-n surrogates expanded at delta_s.
struct PdeltaTable {
  std::vector<int> orders;
  std::vector<double> delta;
  std::vector<double> pe;
  std::vector<std::vector<double>> pen;  ///< pen[i][j]: orders[i], delta[j]
};

PdeltaTable pdelta_curve(double delta_s, double p_max, const std::vector<int>& orders,
                         double lo, double hi, int samples);

/// Gap (order-3 estimate minus true UEP) in the no-load limit delta_s -> 0;
/// equals sqrt(6) - pi.
double te3_gap_no_load_limit();

/// Constant bounding the bracketed factor in the derivative of the order-3
/// gap with respect to cos(delta_s); stays below 3, which is what makes the
/// gap monotone. Equals sqrt(17)/3.
double te3_gap_slope_bound();

}  // namespace ttestab::smib
