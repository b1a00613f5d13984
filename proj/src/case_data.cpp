#include "ttestab/case_data.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include "json.hpp"
#include "ttestab/errors.hpp"

namespace ttestab {

namespace {

constexpr const char* kSchema = "tte-stab-case/1";

BusType bus_type_from_string(const std::string& s, const std::string& where) {
  if (s == "slack") return BusType::Slack;
  if (s == "pv") return BusType::PV;
  if (s == "pq") return BusType::PQ;
  throw validation_error(where + ": unknown bus type '" + s + "'");
}

std::string bus_type_to_string(BusType t) {
  switch (t) {
    case BusType::Slack: return "slack";
    case BusType::PV: return "pv";
    default: return "pq";
  }
}

}  // namespace

std::size_t CaseData::bus_index(int id) const {
  for (std::size_t i = 0; i < buses.size(); ++i) {
    if (buses[i].id == id) return i;
  }
  throw validation_error(name + ": unknown bus id " + std::to_string(id));
}

std::optional<std::size_t> CaseData::find_branch(int from, int to) const {
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const Branch& br = branches[i];
    if ((br.from == from && br.to == to) || (br.from == to && br.to == from)) return i;
  }
  return std::nullopt;
}

void validate_case(const CaseData& c) {
  if (c.buses.empty()) throw validation_error(c.name + ": no buses");
  if (c.machines.empty()) throw validation_error(c.name + ": no machines");
  if (!(c.omega_s > 0.0)) throw validation_error(c.name + ": omega_s must be positive");

  std::set<int> ids;
  for (const Bus& b : c.buses) {
    if (!ids.insert(b.id).second) {
      throw validation_error(c.name + ": duplicate bus id " + std::to_string(b.id));
    }
  }
  int slack_count = 0;
  for (const Bus& b : c.buses) {
    if (b.type == BusType::Slack) ++slack_count;
  }
  if (slack_count != 1) {
    throw validation_error(c.name + ": expected exactly one slack bus, found " +
                           std::to_string(slack_count));
  }
  for (const Branch& br : c.branches) {
    if (!ids.count(br.from) || !ids.count(br.to)) {
      throw validation_error(c.name + ": branch " + std::to_string(br.from) + "-" +
                             std::to_string(br.to) + " references unknown bus");
    }
    if (br.x == 0.0 && br.r == 0.0) {
      throw validation_error(c.name + ": branch " + std::to_string(br.from) + "-" +
                             std::to_string(br.to) + " has zero impedance");
    }
  }
  for (std::size_t i = 0; i < c.machines.size(); ++i) {
    const Machine& m = c.machines[i];
    if (!ids.count(m.bus)) {
      throw validation_error(c.name + ": machine " + std::to_string(i + 1) +
                             " references unknown bus " + std::to_string(m.bus));
    }
    if (!(m.h > 0.0)) {
      throw validation_error(c.name + ": machine " + std::to_string(i + 1) +
                             " must have H > 0");
    }
    if (!(m.xdp > 0.0)) {
      throw validation_error(c.name + ": machine " + std::to_string(i + 1) +
                             " must have x'd > 0");
    }
  }

  // Connectivity over in-service branches.
  std::set<int> seen;
  std::queue<int> frontier;
  frontier.push(c.buses.front().id);
  seen.insert(c.buses.front().id);
  while (!frontier.empty()) {
    const int cur = frontier.front();
    frontier.pop();
    for (const Branch& br : c.branches) {
      if (!br.in_service) continue;
      int other = -1;
      if (br.from == cur) other = br.to;
      if (br.to == cur) other = br.from;
      if (other >= 0 && seen.insert(other).second) frontier.push(other);
    }
  }
  if (seen.size() != c.buses.size()) {
    std::string missing;
    for (const Bus& b : c.buses) {
      if (!seen.count(b.id)) missing += " " + std::to_string(b.id);
    }
    throw validation_error(c.name + ": network is disconnected; unreachable buses:" + missing);
  }
}

CaseData case_from_json(const std::string& text, const std::string& origin) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw validation_error(origin + ": JSON parse error: " + e.what());
  }
  try {
    if (j.at("schema").get<std::string>() != kSchema) {
      throw validation_error(origin + ": unsupported schema '" +
                             j.at("schema").get<std::string>() + "'");
    }
    CaseData c;
    c.name = j.value("name", origin);
    c.base_mva = j.at("base_mva").get<double>();
    c.omega_s = j.at("omega_s").get<double>();
    for (const auto& jb : j.at("buses")) {
      Bus b;
      b.id = jb.at("id").get<int>();
      b.type = bus_type_from_string(jb.at("type").get<std::string>(), origin);
      b.vm = jb.at("vm").get<double>();
      b.va = jb.at("va").get<double>();
      b.pload = jb.value("pload", 0.0);
      b.qload = jb.value("qload", 0.0);
      c.buses.push_back(b);
    }
    for (const auto& jb : j.at("branches")) {
      Branch br;
      br.from = jb.at("from").get<int>();
      br.to = jb.at("to").get<int>();
      br.r = jb.at("r").get<double>();
      br.x = jb.at("x").get<double>();
      br.b = jb.value("b", 0.0);
      br.in_service = jb.value("status", 1) != 0;
      c.branches.push_back(br);
    }
    for (const auto& jm : j.at("machines")) {
      Machine m;
      m.bus = jm.at("bus").get<int>();
      m.h = jm.at("h").get<double>();
      m.d = jm.at("d").get<double>();
      m.xdp = jm.at("xdp").get<double>();
      m.pm = jm.at("pm").get<double>();
      c.machines.push_back(m);
    }
    validate_case(c);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(origin + ": bad case structure: " + e.what());
  }
}

CaseData load_case(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return case_from_json(ss.str(), path);
}

std::string case_to_json(const CaseData& c) {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["name"] = c.name;
  j["base_mva"] = c.base_mva;
  j["omega_s"] = c.omega_s;
  j["buses"] = nlohmann::json::array();
  for (const Bus& b : c.buses) {
    j["buses"].push_back({{"id", b.id},
                          {"type", bus_type_to_string(b.type)},
                          {"vm", b.vm},
                          {"va", b.va},
                          {"pload", b.pload},
                          {"qload", b.qload}});
  }
  j["branches"] = nlohmann::json::array();
  for (const Branch& br : c.branches) {
    j["branches"].push_back({{"from", br.from},
                             {"to", br.to},
                             {"r", br.r},
                             {"x", br.x},
                             {"b", br.b},
                             {"status", br.in_service ? 1 : 0}});
  }
  j["machines"] = nlohmann::json::array();
  for (const Machine& m : c.machines) {
    j["machines"].push_back(
        {{"bus", m.bus}, {"h", m.h}, {"d", m.d}, {"xdp", m.xdp}, {"pm", m.pm}});
  }
  return j.dump(2) + "\n";
}

void save_case(const CaseData& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw validation_error(path + ": cannot open file for writing");
  out << case_to_json(c);
}

std::vector<ContingencySpec> load_contingencies(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error(path + ": cannot open file");
  std::vector<ContingencySpec> out;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && line.rfind("id,", 0) == 0) continue;  // header
    std::istringstream ss(line);
    ContingencySpec spec;
    char comma;
    if (!(ss >> spec.id >> comma >> spec.fault_bus >> comma >> spec.line_from >> comma >>
          spec.line_to)) {
      throw validation_error(path + ":" + std::to_string(lineno) + ": bad contingency row '" +
                             line + "'");
    }
    out.push_back(spec);
  }
  if (out.empty()) throw validation_error(path + ": no contingencies");
  return out;
}

}  // namespace ttestab
