#pragma once

#include <cmath>
#include <vector>

#include "ttestab/integrate.hpp"
#include "ttestab/network.hpp"

namespace ttestab {

// Settings for one clearing-time study.  The defaults mirror the
// simulation conventions used throughout: 1 ms steps, 10 s horizon, pi
// spread threshold, 50 ms escalation, 1 ms bisection width, 1 s cap.
struct CctConfig {
  double dt = 1e-3;
  double horizon = 10.0;
  double spread = M_PI;
  double escalation = 0.05;
  double tol = 1e-3;
  double cap = 1.0;
  // Fault-on dynamics default to the untruncated system; the surrogate
  // fault-on variant (expanded at the prefault equilibrium) exists for
  // sensitivity studies.
  bool tte_fault_on = false;
};

enum class CctStatus { kOk, kExceedsCap };

struct CctResult {
  int contingency_id = 0;
  int order = kOriginalOrder;
  CctStatus status = CctStatus::kOk;
  double cct = 0.0;        // stable-side clearing time; cap when kExceedsCap
  double normalized = 1.0; // cct / original-system cct; +inf when kExceedsCap
};

// One fault-clearing experiment: original-dynamics fault-on phase for
// t_clear seconds from the prefault equilibrium at rest, then the
// order-selected post-fault system for the configured horizon; endpoint
// spread classification.
bool simulate_contingency(const ContingencySet& cont, int order, double t_clear,
                          const CctConfig& cfg);

// Same experiment with the sampled trajectories kept: the fault-on phase on
// [0, t_clear] and the post-clearing phase on [t_clear, t_clear + horizon],
// with the clearing instant present in both.
struct ClearingSimulation {
  Trajectory fault_on;
  Trajectory post;
  bool stable = false;
};

ClearingSimulation simulate_contingency_trajectories(const ContingencySet& cont, int order,
                                                     double t_clear, const CctConfig& cfg);

// Critical clearing time by escalation then bisection: clearing times grow
// in cfg.escalation increments until instability appears, and the bracket
// is bisected to width <= cfg.tol.  The returned time is the last clearing
// time that simulated stable.  kExceedsCap when no instability is found at
// clearing times up to cfg.cap.  The normalized field is left at 1.
CctResult find_cct(const ContingencySet& cont, int order, const CctConfig& cfg);

struct CctTableRow {
  int contingency_id = 0;
  int fault_bus = 0;
  std::pair<int, int> tripped_line{0, 0};
  double cct_original = 0.0;
  CctStatus status_original = CctStatus::kOk;
  std::vector<CctResult> by_order;  // one entry per requested order
};

struct CctTable {
  std::vector<int> orders;
  std::vector<CctTableRow> rows;
};

// Full contingency-by-order table with the original-system column and
// normalized surrogate columns.  Per-cell failures surface as kExceedsCap
// or propagate only if the original system itself cannot be assessed.
CctTable cct_table(const CaseData& c, const std::vector<ContingencySpec>& contingencies,
                   const std::vector<int>& orders, const CctConfig& cfg);

}  // namespace ttestab
