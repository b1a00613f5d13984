#include "ttestab/integrate.hpp"

#include <cmath>
#include <string>

#include "ttestab/errors.hpp"

namespace ttestab {

namespace {

bool state_diverged(const double* x, int m) {
  for (int i = 0; i < 2 * m; ++i) {
    if (!std::isfinite(x[i])) return true;
  }
  for (int i = 0; i < m; ++i) {
    if (std::abs(x[2 * i]) > kDivergenceAngle) return true;
  }
  return false;
}

void check_args(const TteSystem& sys, const Eigen::VectorXd& x0, double T, double dt) {
  if (x0.size() != sys.dim()) {
    throw validation_error("integrate: initial state dimension " + std::to_string(x0.size()) +
                           " does not match 2m = " + std::to_string(sys.dim()));
  }
  if (!(T > 0.0) || !(dt > 0.0)) {
    throw validation_error("integrate: horizon and step must be positive");
  }
}

// One RK4 step of width h from x into xout; k1..k4 and tmp are caller-owned
// scratch of dimension 2m.
void rk4_step(const TteSystem& sys, const double* x, double h, double* xout, double* k1,
              double* k2, double* k3, double* k4, double* tmp) {
  const int d = sys.dim();
  eval_rhs(sys, x, k1);
  for (int i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
  eval_rhs(sys, tmp, k2);
  for (int i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
  eval_rhs(sys, tmp, k3);
  for (int i = 0; i < d; ++i) tmp[i] = x[i] + h * k3[i];
  eval_rhs(sys, tmp, k4);
  for (int i = 0; i < d; ++i) {
    xout[i] = x[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
}

// Step schedule: n_full whole steps, then one remainder step when T is not
// an exact multiple of dt.  The comparison tolerance keeps T = k*dt exact
// despite accumulation error.
struct StepPlan {
  long n_full;
  double remainder;
};

StepPlan plan_steps(double T, double dt) {
  const double steps = T / dt;
  long n = static_cast<long>(std::floor(steps + 1e-9));
  double rem = T - static_cast<double>(n) * dt;
  if (rem < 1e-12 * std::max(1.0, T)) rem = 0.0;
  return {n, rem};
}

}  // namespace

Trajectory integrate(const TteSystem& sys, const Eigen::VectorXd& x0, double T, double dt) {
  check_args(sys, x0, T, dt);
  const int d = sys.dim();
  const StepPlan plan = plan_steps(T, dt);

  Trajectory traj;
  traj.t.reserve(static_cast<std::size_t>(plan.n_full) + 2);
  traj.x.reserve(static_cast<std::size_t>(plan.n_full) + 2);
  traj.t.push_back(0.0);
  traj.x.push_back(x0);

  Eigen::VectorXd cur = x0, next(d), k1(d), k2(d), k3(d), k4(d), tmp(d);
  if (state_diverged(cur.data(), sys.base.m)) {
    traj.diverged = true;
    return traj;
  }
  for (long s = 0; s < plan.n_full; ++s) {
    rk4_step(sys, cur.data(), dt, next.data(), k1.data(), k2.data(), k3.data(), k4.data(),
             tmp.data());
    cur.swap(next);
    traj.t.push_back(static_cast<double>(s + 1) * dt);
    traj.x.push_back(cur);
    if (state_diverged(cur.data(), sys.base.m)) {
      traj.diverged = true;
      return traj;
    }
  }
  if (plan.remainder > 0.0) {
    rk4_step(sys, cur.data(), plan.remainder, next.data(), k1.data(), k2.data(), k3.data(),
             k4.data(), tmp.data());
    cur.swap(next);
    traj.t.push_back(T);
    traj.x.push_back(cur);
    if (state_diverged(cur.data(), sys.base.m)) traj.diverged = true;
  }
  return traj;
}

EndState integrate_endpoint(const TteSystem& sys, const Eigen::VectorXd& x0, double T,
                            double dt) {
  check_args(sys, x0, T, dt);
  const int d = sys.dim();
  const StepPlan plan = plan_steps(T, dt);

  EndState out;
  Eigen::VectorXd cur = x0, next(d), k1(d), k2(d), k3(d), k4(d), tmp(d);
  if (state_diverged(cur.data(), sys.base.m)) {
    out.x = cur;
    out.diverged = true;
    return out;
  }
  for (long s = 0; s < plan.n_full; ++s) {
    rk4_step(sys, cur.data(), dt, next.data(), k1.data(), k2.data(), k3.data(), k4.data(),
             tmp.data());
    cur.swap(next);
    if (state_diverged(cur.data(), sys.base.m)) {
      out.x = cur;
      out.diverged = true;
      return out;
    }
  }
  if (plan.remainder > 0.0) {
    rk4_step(sys, cur.data(), plan.remainder, next.data(), k1.data(), k2.data(), k3.data(),
             k4.data(), tmp.data());
    cur.swap(next);
    if (state_diverged(cur.data(), sys.base.m)) out.diverged = true;
  }
  out.x = cur;
  return out;
}

bool classify_stable(const Trajectory& traj, int m, double delta_max) {
  if (traj.diverged || traj.x.empty()) return false;
  return angle_spread(traj.x.back(), m) < delta_max;
}

bool classify_stable(const Trajectory& traj, int m, double delta_max,
                     const Eigen::VectorXd& sep) {
  if (traj.diverged || traj.x.empty()) return false;
  return angle_spread(traj.x.back(), m, sep) < delta_max;
}

}  // namespace ttestab
