#pragma once

#include <string>

#include "ttestab/boundary.hpp"
#include "ttestab/cct.hpp"
#include "ttestab/integrate.hpp"

namespace ttestab {

// Shortest decimal form that round-trips a double; infinities render as
// "inf"/"-inf" and NaN as "nan" for spreadsheet friendliness.
std::string format_double(double v);

// One row per contingency: the original-system clearing time plus the
// normalized value per order.  Cap-exceeded cells render as "inf".
std::string cct_table_to_csv(const CctTable& t);

// Long-form campaign table, one row per (direction, system) pair.  The
// untruncated reference rows carry order 0.
std::string campaign_to_csv(const BoundaryCampaign& c);

// Per-order ratio summaries: counts, extremes, quantiles and a fixed-width
// histogram over the detected ratios.
std::string campaign_histogram_json(const BoundaryCampaign& c, int bins = 20);

// Trajectory samples as t followed by the interleaved state columns.
std::string trajectory_to_csv(const Trajectory& traj, int m);

}  // namespace ttestab
