#include "ttestab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace ttestab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  // %.17g always round-trips; try shorter forms first so common values stay
  // readable.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) break;
  }
  return buf;
}

std::string cct_table_to_csv(const CctTable& t) {
  std::ostringstream os;
  os << "contingency,fault_bus,line_from,line_to,cct_original";
  for (int order : t.orders) os << ",norm_order_" << order;
  os << "\n";
  for (const auto& row : t.rows) {
    os << row.contingency_id << ',' << row.fault_bus << ',' << row.tripped_line.first << ','
       << row.tripped_line.second << ','
       << (row.status_original == CctStatus::kExceedsCap
               ? "inf"
               : format_double(row.cct_original));
    for (const auto& cell : row.by_order) os << ',' << format_double(cell.normalized);
    os << "\n";
  }
  return os.str();
}

std::string campaign_to_csv(const BoundaryCampaign& c) {
  std::ostringstream os;
  os << "direction_index,order,l_star,ratio,evaluations,outcome\n";
  for (const auto& cell : c.cells) {
    os << cell.direction_index << ',' << cell.order << ',' << format_double(cell.l_star)
       << ',' << format_double(cell.ratio) << ',' << cell.evaluations << ','
       << (cell.undetectable ? "undetectable" : "ok") << "\n";
  }
  return os.str();
}

namespace {

double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

std::string campaign_histogram_json(const BoundaryCampaign& c, int bins) {
  if (bins < 1) throw validation_error("histogram bin count must be at least 1");
  nlohmann::json j;
  j["count"] = c.count;
  j["seed"] = c.seed;
  j["mode"] = c.mode == DirectionMode::kGaussian ? "gaussian" : "positive-orthant";
  j["orders"] = nlohmann::json::array();

  const std::size_t stride = c.orders.size() + 1;
  for (std::size_t k = 0; k < c.orders.size(); ++k) {
    std::vector<double> ratios;
    int undetectable = 0;
    for (int d = 0; d < c.count; ++d) {
      const CampaignCell& cell = c.cells[static_cast<std::size_t>(d) * stride + k + 1];
      if (cell.undetectable || std::isnan(cell.ratio)) {
        ++undetectable;
      } else {
        ratios.push_back(cell.ratio);
      }
    }
    std::sort(ratios.begin(), ratios.end());

    nlohmann::json o;
    o["order"] = c.orders[k];
    o["ok"] = ratios.size();
    o["undetectable"] = undetectable;
    if (!ratios.empty()) {
      o["min"] = ratios.front();
      o["max"] = ratios.back();
      double sum = 0.0;
      for (double r : ratios) sum += r;
      o["mean"] = sum / static_cast<double>(ratios.size());
      o["quantiles"] = {{"p05", quantile(ratios, 0.05)}, {"p25", quantile(ratios, 0.25)},
                        {"p50", quantile(ratios, 0.50)}, {"p75", quantile(ratios, 0.75)},
                        {"p95", quantile(ratios, 0.95)}};
      const double lo = ratios.front();
      const double hi = ratios.back();
      const double width = (hi > lo) ? (hi - lo) / bins : 1.0;
      std::vector<int> counts(static_cast<std::size_t>(bins), 0);
      std::vector<double> edges;
      for (int b = 0; b <= bins; ++b) edges.push_back(lo + width * b);
      for (double r : ratios) {
        auto b = static_cast<std::size_t>((r - lo) / width);
        if (b >= counts.size()) b = counts.size() - 1; // top edge inclusive
        ++counts[b];
      }
      o["bin_edges"] = edges;
      o["bin_counts"] = counts;
    }
    j["orders"].push_back(std::move(o));
  }
  return j.dump(2);
}

std::string trajectory_to_csv(const Trajectory& traj, int m) {
  std::ostringstream os;
  os << "t";
  for (int i = 1; i <= m; ++i) os << ",delta_" << i << ",omega_" << i;
  os << "\n";
  for (std::size_t k = 0; k < traj.t.size(); ++k) {
    os << format_double(traj.t[k]);
    for (Eigen::Index i = 0; i < traj.x[k].size(); ++i)
      os << ',' << format_double(traj.x[k][i]);
    os << "\n";
  }
  return os.str();
}

}  // namespace ttestab
