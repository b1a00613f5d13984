#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ttestab {

/// Bus types for the power-flow problem.
enum class BusType { Slack, PV, PQ };

struct Bus {
  int id = 0;
  BusType type = BusType::PQ;
  double vm = 1.0;     ///< voltage magnitude, pu (solved value)
  double va = 0.0;     ///< voltage angle, rad (solved value)
  double pload = 0.0;  ///< active load, pu on system base
  double qload = 0.0;  ///< reactive load, pu
};

struct Branch {
  int from = 0;
  int to = 0;
  double r = 0.0;  ///< series resistance, pu
  double x = 0.0;  ///< series reactance, pu
  double b = 0.0;  ///< total line charging susceptance, pu (split half per end)
  bool in_service = true;
};

struct Machine {
  int bus = 0;
  double h = 0.0;    ///< inertia constant, s
  double d = 0.0;    ///< damping constant, same per-unit system as h
  double xdp = 0.0;  ///< transient reactance, pu
  double pm = 0.0;   ///< mechanical power, pu (equals generated P in the solved case)
};

/// A classical-model study case: network, machines, and the solved power
/// flow it was built around. Schema `tte-stab-case/1`, JSON on disk.
struct CaseData {
  std::string name;
  double base_mva = 100.0;
  double omega_s = 0.0;  ///< synchronous speed, rad/s
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<Machine> machines;

  /// Index into buses for a bus id; throws validation_error when missing.
  std::size_t bus_index(int id) const;
  /// Branch index matching (from, to) in either orientation; nullopt if absent.
  std::optional<std::size_t> find_branch(int from, int to) const;
};

/// Parse + structural validation (unique ids, machines on existing buses,
/// H > 0, connectivity over in-service branches). Throws validation_error
/// with a location diagnostic on failure.
CaseData load_case(const std::string& path);

/// Validation used by load_case, exposed for programmatically built cases.
void validate_case(const CaseData& c);

/// Serialize back to the same schema. Values round-trip exactly.
void save_case(const CaseData& c, const std::string& path);
std::string case_to_json(const CaseData& c);
CaseData case_from_json(const std::string& text, const std::string& origin = "<string>");

/// One line-trip contingency: fault applied at fault_bus, cleared by
/// tripping the (from, to) branch. fault_bus must be an endpoint.
struct ContingencySpec {
  int id = 0;
  int fault_bus = 0;
  int line_from = 0;
  int line_to = 0;
};

/// CSV with header id,fault_bus,line_from,line_to.
std::vector<ContingencySpec> load_contingencies(const std::string& path);

}  // namespace ttestab
