#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ttestab/network.hpp"

namespace ttestab {

// Order sentinel selecting the untruncated trigonometric dynamics.
inline constexpr int kOriginalOrder = 0;
inline constexpr int kMaxTteOrder = 15;

// Swing dynamics of a reduced network, either in the original trigonometric
// form or as the order-n polynomial surrogate expanded at expansion_sep.
// State layout is interleaved: (delta_1, dw_1, ..., delta_m, dw_m).
struct TteSystem {
  ReducedNetwork base;
  int order = kOriginalOrder;
  Eigen::VectorXd expansion_sep;

  // Precomputed per-machine constants: alpha_i = D_i/2H_i, gain_i = w_s/2H_i,
  // e2g_i = E_i^2 G_i.
  Eigen::VectorXd alpha, gain, e2g;
  // Pair series coefficients, row-major (i*m + j) blocks of (order + 1)
  // doubles; block (i,j) expands C_ij sin(th) + D_ij cos(th) around
  // th0 = sep_i - sep_j in powers of (ddelta_i - ddelta_j).  Empty for the
  // original order.
  std::vector<double> pair_coeffs;

  int dim() const { return 2 * base.m; }
};

// Assembles the dynamics for one order.  sep must be an equilibrium of net
// (max residual < 1e-6 pu) unless check_equilibrium is false; the unchecked
// form exists for fault-on networks, which have no equilibrium but still
// need dynamics during the fault.
TteSystem build_tte_system(const ReducedNetwork& net, const Eigen::VectorXd& sep, int order,
                           bool check_equilibrium = true);

// Derivative of the interleaved state.  The raw form writes dx in place and
// performs no allocation; the Eigen form is a checked convenience wrapper.
void eval_rhs(const TteSystem& sys, const double* x, double* dx);
Eigen::VectorXd rhs(const TteSystem& sys, const Eigen::VectorXd& state);

// Largest pairwise rotor-angle separation |delta_i - delta_j| of an
// interleaved state; with sep, separations are measured on the deviations
// delta_i - sep_i instead.
double angle_spread(const Eigen::VectorXd& state, int m);
double angle_spread(const Eigen::VectorXd& state, int m, const Eigen::VectorXd& sep);

}  // namespace ttestab
