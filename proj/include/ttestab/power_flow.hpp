#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ttestab/case_data.hpp"

namespace ttestab {

// AC power-flow solution for a case.  Voltages are per-unit phasors indexed
// like case.buses; injections are net bus injections (generation minus load).
struct PowerFlowResult {
  std::vector<std::complex<double>> v;  // bus voltage phasors
  std::vector<double> p_inj;            // net active injection, pu
  std::vector<double> q_inj;            // net reactive injection, pu
  int iterations = 0;
  double max_mismatch = 0.0;  // final power mismatch, pu
};

// Bus admittance matrix from branch data; in-service branches only.
// Row/column order follows case.buses.
Eigen::MatrixXcd bus_admittance(const CaseData& c);

// Newton-Raphson power flow in polar coordinates.  The slack bus holds
// vm/va fixed; PV buses hold vm and their scheduled injection
// (machine pm minus bus load); PQ buses hold both injections.
// Starts from the voltages stored in the case (flat start if va = 0).
// Throws numerical_error if the mismatch does not reach tol within
// max_iter iterations.
PowerFlowResult solve_power_flow(const CaseData& c, double tol = 1e-12, int max_iter = 50);

// Writes the solved voltages back into the bus records and the slack
// machine's pm so that the stored case is self-consistent.
void apply_solution(CaseData& c, const PowerFlowResult& r);

}  // namespace ttestab
