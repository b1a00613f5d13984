#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ttestab/case_data.hpp"

namespace ttestab {

// Classical-model network reduced to the generator internal nodes.
// Electrical power at machine i for internal angles delta:
//   P_ei = E_i^2 G_i + sum_{j != i} [ C_ij sin(delta_i - delta_j)
//                                   + D_ij cos(delta_i - delta_j) ]
struct ReducedNetwork {
  int m = 0;
  Eigen::VectorXd E;    // internal EMF magnitudes, pu
  Eigen::VectorXd G;    // driving-point conductances of the reduced matrix, pu
  Eigen::MatrixXd C;    // E_i E_j * Im(Yred_ij), zero diagonal, symmetric
  Eigen::MatrixXd D;    // E_i E_j * Re(Yred_ij), zero diagonal, symmetric
  Eigen::VectorXd H;    // inertia constants, s
  Eigen::VectorXd Dmp;  // damping coefficients
  Eigen::VectorXd Pm;   // mechanical power, pu
  double omega_s = 0.0;
  // Internal EMF angles of the power-flow solution the network was built
  // from.  For an unfaulted topology these angles are an equilibrium of the
  // swing dynamics; for a grounded (fault-on) network they are only the
  // rotor positions at fault inception.
  Eigen::VectorXd sep;

  double electrical_power(int i, const Eigen::VectorXd& delta) const;
};

// Gaussian elimination of every node not listed in keep, preserving the
// port behavior at the kept nodes.  Throws numerical_error naming the
// eliminated positions if the eliminated block is numerically singular.
Eigen::MatrixXcd kron_reduce(const Eigen::MatrixXcd& y,
                             const std::vector<Eigen::Index>& keep);

// Builds the reduced network from the power-flow solution stored in the
// case: loads become constant admittances at the stored voltages, machines
// become constant EMFs behind x'd with P_m taken from the solved generator
// output, and every network bus is eliminated.  grounded_bus pins that bus
// to zero voltage (its row and column are deleted before elimination);
// tripped_line removes one branch from the reduction topology only.  Both
// options leave the EMFs and P_m at the stored-solution values.
ReducedNetwork reduce_network(const CaseData& c,
                              std::optional<int> grounded_bus = std::nullopt,
                              std::optional<std::pair<int, int>> tripped_line = std::nullopt);

// Newton solve of P_mi = P_ei(delta) with machine 1's angle fixed to the
// guess value as the reference.  Converges the remaining m-1 equations,
// then verifies all m residuals are below 1e-8 pu.  Throws numerical_error
// on non-convergence and, distinctly, when the residual check fails
// (inconsistent dispatch).
Eigen::VectorXd solve_sep(const ReducedNetwork& net, const Eigen::VectorXd& guess);

// Fault-on/post-fault network triple for one line-tripping contingency.
struct ContingencySet {
  int id = 0;
  int fault_bus = 0;
  std::pair<int, int> tripped_line{0, 0};
  ReducedNetwork prefault;
  ReducedNetwork fault_on;
  ReducedNetwork postfault;
  Eigen::VectorXd postfault_sep;
};

// Builds the three networks for a solid fault at fault_bus cleared by
// tripping tripped_line.  fault_bus must be an endpoint of the line.  The
// post-fault network comes from a re-solved power flow on the tripped
// topology (PV setpoints kept, slack at machine 1's bus) so that an exact
// post-fault equilibrium exists; the fault-on network keeps the prefault
// EMFs and P_m with the faulted bus grounded.
ContingencySet build_contingency(const CaseData& c, int fault_bus,
                                 std::pair<int, int> tripped_line, int id = 0);

// Returns the case with the listed machines' P_m replaced (key: 1-based
// machine number, value: pu) and the power flow re-solved from a flat
// start with the slack at machine 1's bus.
CaseData redispatch(const CaseData& c, const std::map<int, double>& pm_by_machine);

}  // namespace ttestab
