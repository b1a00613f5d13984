#include "ttestab/boundary.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "ttestab/dynamics.hpp"

namespace ttestab {

namespace {

void check_config(const SearchConfig& cfg) {
  if (!(cfg.l0 > 0.0) || !(cfg.s0 > 0.0) || !(cfg.eps > 0.0) || !(cfg.horizon > 0.0) ||
      !(cfg.spread > 0.0) || !(cfg.dt > 0.0)) {
    throw validation_error("search config fields must all be positive");
  }
  if (!(cfg.eps < cfg.s0)) {
    throw validation_error("search config requires eps < s0");
  }
  if (!(cfg.speed_weight > 0.0)) {
    throw validation_error("search config speed_weight must be positive");
  }
}

// 53-bit uniform in [0, 1) from the raw engine output; fixed mapping so the
// stream is identical across standard library implementations.
double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void fill_gaussian(std::mt19937_64& rng, Eigen::VectorXd& v) {
  const double two_pi = 2.0 * M_PI;
  for (Eigen::Index k = 0; k < v.size(); k += 2) {
    const double u1 = 1.0 - next_uniform(rng); // (0, 1]: keeps the log finite
    const double u2 = next_uniform(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    v[k] = r * std::cos(two_pi * u2);
    if (k + 1 < v.size()) v[k + 1] = r * std::sin(two_pi * u2);
  }
}

void fill_positive(std::mt19937_64& rng, Eigen::VectorXd& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = next_uniform(rng);
}

void check_ray(const TteSystem& sys, const Eigen::VectorXd& sep,
               const Eigen::VectorXd& direction) {
  if (sep.size() != sys.base.m) {
    throw validation_error("sep must hold one angle per machine");
  }
  if ((sep - sys.expansion_sep).cwiseAbs().maxCoeff() > 1e-9) {
    throw validation_error("sep does not match the system's expansion point");
  }
  if (direction.size() != sys.dim()) {
    throw validation_error("direction dimension must match the state dimension");
  }
  if (std::abs(direction.norm() - 1.0) > 1e-9) {
    throw validation_error("direction must be a unit vector");
  }
}

}  // namespace

undetectable_boundary::undetectable_boundary(double l, double s, int evals, bool bracket)
    : numerical_error([&] {
        std::ostringstream os;
        if (bracket) {
          os << "no boundary detected: the crossing at distance " << l
             << " has no stable-unstable bracket (still stable past it after " << evals
             << " simulations)";
        } else {
          os << "no boundary detected within " << evals
             << " simulations (search at distance " << l << ", step " << s << ")";
        }
        return os.str();
      }()),
      last_l(l),
      last_s(s),
      evaluations(evals),
      bracket_failed(bracket) {}

std::vector<Eigen::VectorXd> sample_directions(int dim, int count, std::uint64_t seed,
                                               DirectionMode mode) {
  if (dim < 1) throw validation_error("direction dimension must be at least 1");
  if (count < 1) throw validation_error("direction count must be at least 1");
  std::mt19937_64 rng(seed);
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(count));
  Eigen::VectorXd v(dim);
  while (static_cast<int>(out.size()) < count) {
    if (mode == DirectionMode::kGaussian) {
      fill_gaussian(rng, v);
    } else {
      fill_positive(rng, v);
    }
    const double n = v.norm();
    if (n < 1e-12) continue; // degenerate draw; try again
    out.push_back(v / n);
  }
  return out;
}

bool probe_is_stable(const TteSystem& sys, const Eigen::VectorXd& sep,
                     const Eigen::VectorXd& direction, double l, const SearchConfig& cfg) {
  check_config(cfg);
  check_ray(sys, sep, direction);
  const int m = sys.base.m;

  Eigen::VectorXd sep_state = Eigen::VectorXd::Zero(sys.dim());
  for (int i = 0; i < m; ++i) sep_state[2 * i] = sep[i];

  // Displacement per unit distance; the speed components carry the
  // configured metric weight.
  Eigen::VectorXd step_dir = direction;
  for (int i = 0; i < m; ++i) step_dir[2 * i + 1] *= cfg.speed_weight;

  const Eigen::VectorXd x0 = sep_state + l * step_dir;
  const EndState end = integrate_endpoint(sys, x0, cfg.horizon, cfg.dt);
  return !end.diverged && angle_spread(end.x, m) < cfg.spread;
}

BoundaryResult search_along(const TteSystem& sys, const Eigen::VectorXd& sep,
                            const Eigen::VectorXd& direction, const SearchConfig& cfg,
                            SearchTrace* trace) {
  check_config(cfg);
  check_ray(sys, sep, direction);

  double l = cfg.l0;
  double s = cfg.s0;
  int evaluations = 0;
  const auto classify = [&](double dist) {
    if (evaluations >= kMaxBoundaryEvaluations) {
      throw undetectable_boundary(l, s, evaluations);
    }
    const bool stable = probe_is_stable(sys, sep, direction, dist, cfg);
    ++evaluations;
    if (trace != nullptr) {
      trace->l.push_back(dist);
      trace->s.push_back(s);
      trace->stable.push_back(stable ? 1 : 0);
    }
    return stable;
  };
  while (true) {
    if (classify(l)) {
      if (s < cfg.eps) {
        // Converged.  Confirm the advertised bracket before returning; a
        // crossing whose far side probes stable again is a sliver of the
        // endpoint classifier, not a boundary.
        if (!classify(l + 2.0 * cfg.eps)) return {direction, l, evaluations};
        throw undetectable_boundary(l, s, evaluations, /*bracket_failed=*/true);
      }
      l += s;
    } else {
      s /= 2.0;
      l -= s;
    }
  }
}

BoundaryCampaign boundary_campaign(const ReducedNetwork& net, const Eigen::VectorXd& sep,
                                   const std::vector<int>& orders, int count,
                                   std::uint64_t seed, const SearchConfig& cfg,
                                   DirectionMode mode, int threads) {
  check_config(cfg);
  if (count < 1) throw validation_error("campaign direction count must be at least 1");
  if (threads < 1) throw validation_error("campaign thread count must be at least 1");
  for (int order : orders) {
    if (order < 1 || order > kMaxTteOrder) {
      throw validation_error("campaign orders must lie in [1, " +
                             std::to_string(kMaxTteOrder) + "]");
    }
  }

  // One immutable system per column, shared by all workers.
  std::vector<TteSystem> systems;
  systems.reserve(orders.size() + 1);
  systems.push_back(build_tte_system(net, sep, kOriginalOrder));
  for (int order : orders) systems.push_back(build_tte_system(net, sep, order));

  const std::vector<Eigen::VectorXd> directions =
      sample_directions(2 * net.m, count, seed, mode);

  BoundaryCampaign out;
  out.orders = orders;
  out.count = count;
  out.seed = seed;
  out.mode = mode;
  out.cfg = cfg;
  const std::size_t stride = orders.size() + 1;
  out.cells.resize(static_cast<std::size_t>(count) * stride);

  const auto run_direction = [&](int d) {
    CampaignCell* row = out.cells.data() + static_cast<std::size_t>(d) * stride;
    double l_orig = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < systems.size(); ++k) {
      CampaignCell& cell = row[k];
      cell.direction_index = d;
      cell.order = systems[k].order;
      try {
        const BoundaryResult r = search_along(systems[k], sep, directions[d], cfg);
        cell.l_star = r.l_star;
        cell.evaluations = r.evaluations;
        if (k == 0) {
          l_orig = r.l_star;
          cell.ratio = 1.0;
        } else {
          cell.ratio = r.l_star / l_orig; // NaN when the reference was capped
        }
      } catch (const undetectable_boundary& e) {
        cell.undetectable = true;
        cell.evaluations = e.evaluations;
      }
    }
  };

  if (threads == 1 || count == 1) {
    for (int d = 0; d < count; ++d) run_direction(d);
    return out;
  }

  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min(threads, count);
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int d = next.fetch_add(1); d < count; d = next.fetch_add(1)) run_direction(d);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace ttestab
