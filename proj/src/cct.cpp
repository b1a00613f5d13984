#include "ttestab/cct.hpp"

#include <limits>
#include <string>

#include "ttestab/dynamics.hpp"
#include "ttestab/errors.hpp"

namespace ttestab {

namespace {

void check_cfg(const CctConfig& cfg) {
  if (!(cfg.dt > 0.0) || !(cfg.horizon > 0.0) || !(cfg.spread > 0.0) ||
      !(cfg.escalation > 0.0) || !(cfg.tol > 0.0) || !(cfg.cap > 0.0)) {
    throw validation_error("cct: all configuration values must be positive");
  }
}

Eigen::VectorXd rest_state(const Eigen::VectorXd& angles) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(2 * angles.size());
  for (Eigen::Index i = 0; i < angles.size(); ++i) x[2 * i] = angles[i];
  return x;
}

// Systems for one contingency/order pair, built once per search.
struct ContingencySystems {
  TteSystem fault_on;
  TteSystem post;
  Eigen::VectorXd x0;

  ContingencySystems(const ContingencySet& cont, int order, const CctConfig& cfg)
      : fault_on(build_tte_system(cont.fault_on, cont.prefault.sep,
                                  cfg.tte_fault_on ? order : kOriginalOrder,
                                  /*check_equilibrium=*/false)),
        post(build_tte_system(cont.postfault, cont.postfault_sep, order)),
        x0(rest_state(cont.prefault.sep)) {}

  bool stable_for(double t_clear, const CctConfig& cfg) const {
    Eigen::VectorXd start = x0;
    if (t_clear > 0.0) {
      EndState mid = integrate_endpoint(fault_on, x0, t_clear, cfg.dt);
      if (mid.diverged) return false;
      start = std::move(mid.x);
    }
    const EndState fin = integrate_endpoint(post, start, cfg.horizon, cfg.dt);
    if (fin.diverged) return false;
    return angle_spread(fin.x, post.base.m) < cfg.spread;
  }
};

}  // namespace

bool simulate_contingency(const ContingencySet& cont, int order, double t_clear,
                          const CctConfig& cfg) {
  check_cfg(cfg);
  if (t_clear < 0.0) throw validation_error("simulate_contingency: negative clearing time");
  return ContingencySystems(cont, order, cfg).stable_for(t_clear, cfg);
}

ClearingSimulation simulate_contingency_trajectories(const ContingencySet& cont, int order,
                                                     double t_clear, const CctConfig& cfg) {
  check_cfg(cfg);
  if (t_clear < 0.0) throw validation_error("simulate_contingency: negative clearing time");
  const ContingencySystems sys(cont, order, cfg);

  ClearingSimulation out;
  Eigen::VectorXd start = sys.x0;
  if (t_clear > 0.0) {
    out.fault_on = integrate(sys.fault_on, sys.x0, t_clear, cfg.dt);
    start = out.fault_on.x.back();
  } else {
    out.fault_on.t.push_back(0.0);
    out.fault_on.x.push_back(sys.x0);
  }
  if (out.fault_on.diverged) {
    out.post.t.push_back(out.fault_on.t.back());
    out.post.x.push_back(out.fault_on.x.back());
    out.post.diverged = true;
    return out;
  }
  out.post = integrate(sys.post, start, cfg.horizon, cfg.dt);
  for (double& t : out.post.t) t += t_clear;
  out.stable = !out.post.diverged &&
               angle_spread(out.post.x.back(), sys.post.base.m) < cfg.spread;
  return out;
}

CctResult find_cct(const ContingencySet& cont, int order, const CctConfig& cfg) {
  check_cfg(cfg);
  const ContingencySystems sys(cont, order, cfg);

  CctResult res;
  res.contingency_id = cont.id;
  res.order = order;

  // Escalation: march clearing times upward until one simulates unstable.
  double t_lo = 0.0;
  double t_hi = 0.0;
  bool found_unstable = false;
  for (int k = 1;; ++k) {
    const double t = k * cfg.escalation;
    if (t > cfg.cap + 1e-12) break;
    if (sys.stable_for(t, cfg)) {
      t_lo = t;
    } else {
      t_hi = t;
      found_unstable = true;
      break;
    }
  }
  if (!found_unstable) {
    res.status = CctStatus::kExceedsCap;
    res.cct = cfg.cap;
    return res;
  }

  while (t_hi - t_lo > cfg.tol) {
    const double mid = 0.5 * (t_lo + t_hi);
    if (sys.stable_for(mid, cfg)) {
      t_lo = mid;
    } else {
      t_hi = mid;
    }
  }
  res.cct = t_lo;
  return res;
}

CctTable cct_table(const CaseData& c, const std::vector<ContingencySpec>& contingencies,
                   const std::vector<int>& orders, const CctConfig& cfg) {
  check_cfg(cfg);
  CctTable table;
  table.orders = orders;
  table.rows.reserve(contingencies.size());
  for (const ContingencySpec& spec : contingencies) {
    const ContingencySet cont =
        build_contingency(c, spec.fault_bus, {spec.line_from, spec.line_to}, spec.id);
    CctTableRow row;
    row.contingency_id = spec.id;
    row.fault_bus = spec.fault_bus;
    row.tripped_line = {spec.line_from, spec.line_to};

    const CctResult orig = find_cct(cont, kOriginalOrder, cfg);
    row.cct_original = orig.cct;
    row.status_original = orig.status;

    for (int order : orders) {
      CctResult r = find_cct(cont, order, cfg);
      if (r.status == CctStatus::kExceedsCap) {
        r.normalized = std::numeric_limits<double>::infinity();
      } else if (orig.status == CctStatus::kExceedsCap) {
        r.normalized = std::numeric_limits<double>::quiet_NaN();
      } else {
        r.normalized = r.cct / orig.cct;
      }
      row.by_order.push_back(r);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace ttestab
