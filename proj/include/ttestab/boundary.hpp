#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ttestab/errors.hpp"
#include "ttestab/integrate.hpp"
#include "ttestab/network.hpp"

namespace ttestab {

// Settings for one directional boundary search.  Distances and steps are in
// the mixed rad/pu-speed norm of the interleaved state space.
struct SearchConfig {
  double l0 = 0.1;       // starting distance from the equilibrium
  double s0 = 0.1;       // starting step
  double eps = 1e-3;     // the search returns once the step falls below this
  double horizon = 10.0; // simulation time per probe, s
  double spread = M_PI;  // endpoint pairwise angle threshold, rad
  double dt = 1e-3;      // integration step, s
  // rad/s of speed displacement applied per unit of direction speed
  // component.  1 probes in the raw (rad, rad/s) state metric, where unit
  // directions barely perturb speeds and boundary crossings land far from
  // the expansion point; omega_s treats direction speed components as
  // per-unit speeds, which balances the coordinates energetically.
  double speed_weight = 1.0;
};

// Hard cap on simulations per direction.  Directions that exhaust it have no
// detectable boundary: the probes keep classifying stable no matter how far
// out they start, which some surrogate orders genuinely exhibit.
inline constexpr int kMaxBoundaryEvaluations = 10000;

// Carries the state of a search that found no verifiable boundary: either
// the evaluation budget ran out while the probes kept classifying stable,
// or the converged crossing failed its bracket confirmation (see
// search_along).  last_l/last_s are the distance and step in force when the
// search gave up.
class undetectable_boundary : public numerical_error {
 public:
  undetectable_boundary(double last_l, double last_s, int evaluations,
                        bool bracket_failed = false);

  double last_l = 0.0;
  double last_s = 0.0;
  int evaluations = 0;
  bool bracket_failed = false;
};

struct BoundaryResult {
  Eigen::VectorXd direction; // unit vector, interleaved state layout
  double l_star = 0.0;       // stable-side boundary distance
  int evaluations = 0;       // simulations spent
};

// Per-probe record of a search: distance, step in force, and verdict of
// each simulation, in order.
struct SearchTrace {
  std::vector<double> l;
  std::vector<double> s;
  std::vector<char> stable;
};

enum class DirectionMode {
  // Uniform on the unit sphere: normalized standard-normal components.
  kGaussian,
  // Normalized uniform-[0,1) components; every direction lies in the
  // non-negative orthant.  Provided for comparison with tools that build
  // "random unit vectors" this way.
  kPositiveOrthant,
};

// Reproducible batch of unit vectors of the given state dimension.  The
// stream is fixed by (dim, count, seed, mode) alone and does not depend on
// the platform's distribution implementations.
std::vector<Eigen::VectorXd> sample_directions(int dim, int count, std::uint64_t seed,
                                               DirectionMode mode = DirectionMode::kGaussian);

// One probe of the directional search: displaces the equilibrium state by
// distance l along the unit direction (speed components scaled by
// cfg.speed_weight), simulates for the horizon, and applies the endpoint
// spread test.  search_along classifies every probe, including its final
// bracket confirmation, through this function, so an external check of a
// returned distance sees the exact classification the search saw.  Endpoint
// verdicts near a chaotic crossing flip on one-ulp changes to the initial
// state, so reimplementations of the displacement are not equivalent.
bool probe_is_stable(const TteSystem& sys, const Eigen::VectorXd& sep,
                     const Eigen::VectorXd& direction, double l, const SearchConfig& cfg);

// Directional bisection for the stability-boundary distance: starting from
// x = sep_state + l*direction with l = l0, each probe simulates for the
// horizon and classifies by endpoint spread.  A stable probe advances l by
// s (or converges once s < eps); an unstable probe halves s and retreats.
// Convergence is confirmed with one final probe: the returned l_star
// classifies stable while l_star + 2*eps classifies unstable.  Where the
// endpoint classification flickers (bounded chaotic motion far from the
// equilibrium), the bisection can converge onto a sliver of the classifier
// rather than a boundary; such a crossing fails the confirmation and is
// reported as undetectable.  sep holds the m machine angles and must be the
// equilibrium the system was expanded at.  Throws undetectable_boundary at
// the evaluation cap or on a failed confirmation.  trace, when given,
// receives one record per probe.
BoundaryResult search_along(const TteSystem& sys, const Eigen::VectorXd& sep,
                            const Eigen::VectorXd& direction, const SearchConfig& cfg,
                            SearchTrace* trace = nullptr);

// One direction/order entry of a campaign.  ratio divides l_star by the
// untruncated system's distance along the same direction; it is NaN when
// either side is undetectable.  The untruncated reference rows carry
// order = kOriginalOrder and ratio 1.
struct CampaignCell {
  int direction_index = 0;
  int order = kOriginalOrder;
  double l_star = std::numeric_limits<double>::quiet_NaN();
  double ratio = std::numeric_limits<double>::quiet_NaN();
  int evaluations = 0;
  bool undetectable = false;
};

struct BoundaryCampaign {
  std::vector<int> orders; // surrogate orders, as requested
  int count = 0;
  std::uint64_t seed = 0;
  DirectionMode mode = DirectionMode::kGaussian;
  SearchConfig cfg;
  // Direction-major: for each direction, the untruncated reference cell
  // followed by one cell per entry of orders.
  std::vector<CampaignCell> cells;
};

// Batched boundary comparison: for count sampled directions, searches the
// untruncated system and every requested surrogate order along the same
// direction and records the distance ratios.  sep holds the m machine
// angles of the equilibrium of net.  Per-direction failures are recorded as
// undetectable cells and never abort the campaign.  threads > 1 fans the
// directions out to workers; the cell order is independent of the schedule.
BoundaryCampaign boundary_campaign(const ReducedNetwork& net, const Eigen::VectorXd& sep,
                                   const std::vector<int>& orders, int count,
                                   std::uint64_t seed, const SearchConfig& cfg,
                                   DirectionMode mode = DirectionMode::kGaussian,
                                   int threads = 1);

}  // namespace ttestab
