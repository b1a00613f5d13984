#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ttestab/dynamics.hpp"

namespace ttestab {

// Divergence guard: any |delta_i| beyond this (or any non-finite value)
// marks the trajectory diverged and stops the integration.
inline constexpr double kDivergenceAngle = 1e4;

// Fixed-step trajectory.  Times are strictly increasing; the final step is
// shortened so the last sample lands exactly on the requested horizon.
struct Trajectory {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> x;
  bool diverged = false;
};

// Endpoint-only integration result for searches that never inspect the
// interior of the trajectory.
struct EndState {
  Eigen::VectorXd x;
  bool diverged = false;
};

// Classical fixed-step fourth-order Runge-Kutta over [0, T].
Trajectory integrate(const TteSystem& sys, const Eigen::VectorXd& x0, double T, double dt);

// Same scheme without sample recording; allocation is limited to a handful
// of work vectors per call.
EndState integrate_endpoint(const TteSystem& sys, const Eigen::VectorXd& x0, double T,
                            double dt);

// Endpoint stability test: TRUE iff the trajectory did not diverge and the
// final pairwise angle spread is below delta_max.  With sep, spreads are
// measured relative to the equilibrium offsets instead of absolutely.
bool classify_stable(const Trajectory& traj, int m, double delta_max);
bool classify_stable(const Trajectory& traj, int m, double delta_max,
                     const Eigen::VectorXd& sep);

}  // namespace ttestab
