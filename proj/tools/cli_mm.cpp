#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "json.hpp"
#include "ttestab/boundary.hpp"
#include "ttestab/cct.hpp"
#include "ttestab/report.hpp"

namespace cli {

namespace {

struct MmOptions {
  std::string out_dir;
  std::string case_path;
  std::string contingencies_path;
  std::string orders = "2..9";
  std::string order_one = "original";
  std::string mode = "gaussian";
  std::string redispatch_spec = "2=2.0,3=1.0";
  int cont_id = 0;
  double t_clear = 0.0;
  int count = 200;
  std::uint64_t seed = 42;
  int threads = 1;
  int bins = 20;
  bool tte_fault_on = false;
  bool compare_tables = false;
  ttestab::SearchConfig search;
  ttestab::CctConfig cct;
};

int parse_single_order(const std::string& text) {
  const auto orders = parse_orders(text);
  if (orders.size() != 1) {
    throw ttestab::validation_error("expected a single order, got: " + text);
  }
  return orders.front();
}

std::map<int, double> parse_redispatch(const std::string& text) {
  std::map<int, double> out;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw ttestab::validation_error("bad redispatch entry (want machine=pu): " + item);
    }
    try {
      out[std::stoi(item.substr(0, eq))] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw ttestab::validation_error("bad redispatch entry (want machine=pu): " + item);
    }
  }
  if (out.empty()) throw ttestab::validation_error("empty redispatch list");
  return out;
}

ttestab::ContingencySpec find_contingency(const MmOptions& opt) {
  if (opt.contingencies_path.empty()) {
    throw ttestab::validation_error("--contingencies is required for this command");
  }
  for (const auto& spec : ttestab::load_contingencies(opt.contingencies_path)) {
    if (spec.id == opt.cont_id) return spec;
  }
  throw ttestab::validation_error("contingency id " + std::to_string(opt.cont_id) +
                                  " not found in " + opt.contingencies_path);
}

// The campaign and expansion commands operate on the base network, or on a
// contingency's post-clearing network when --cont is given.
std::pair<ttestab::ReducedNetwork, Eigen::VectorXd> select_network(const MmOptions& opt) {
  const ttestab::CaseData c = ttestab::load_case(opt.case_path);
  if (opt.cont_id == 0) {
    ttestab::ReducedNetwork net = ttestab::reduce_network(c);
    const Eigen::VectorXd sep = ttestab::solve_sep(net, net.sep);
    net.sep = sep;
    return {std::move(net), sep};
  }
  const auto spec = find_contingency(opt);
  ttestab::ContingencySet cont = ttestab::build_contingency(
      c, spec.fault_bus, {spec.line_from, spec.line_to}, spec.id);
  return {std::move(cont.postfault), std::move(cont.postfault_sep)};
}

nlohmann::json to_json(const Eigen::VectorXd& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

nlohmann::json to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

void run_expand(const MmOptions& opt) {
  const int order = parse_single_order(opt.order_one);
  auto [net, sep] = select_network(opt);
  const ttestab::TteSystem sys = ttestab::build_tte_system(net, sep, order);

  nlohmann::json j;
  j["machines"] = net.m;
  j["order"] = sys.order;
  j["omega_s"] = net.omega_s;
  j["emf"] = to_json(net.E);
  j["conductance"] = to_json(net.G);
  j["inertia"] = to_json(net.H);
  j["damping"] = to_json(net.Dmp);
  j["mechanical_power"] = to_json(net.Pm);
  j["coupling_sin"] = to_json(net.C);
  j["coupling_cos"] = to_json(net.D);
  j["sep"] = to_json(sep);
  if (sys.order != ttestab::kOriginalOrder) {
    nlohmann::json blocks = nlohmann::json::array();
    const int width = sys.order + 1;
    for (int i = 0; i < net.m; ++i) {
      for (int k = 0; k < net.m; ++k) {
        if (i == k) continue;
        const double* c0 = sys.pair_coeffs.data() + (i * net.m + k) * width;
        nlohmann::json b;
        b["from"] = i + 1;
        b["to"] = k + 1;
        b["coefficients"] = std::vector<double>(c0, c0 + width);
        blocks.push_back(std::move(b));
      }
    }
    j["pair_series"] = std::move(blocks);
  }

  const auto dir = resolve_out_dir(opt.out_dir);
  write_file(dir, "expand.json", j.dump(2) + "\n");
  std::printf("wrote %s\n", (dir / "expand.json").c_str());
}

void run_simulate(const MmOptions& opt) {
  const int order = parse_single_order(opt.order_one);
  const ttestab::CaseData c = ttestab::load_case(opt.case_path);
  const auto spec = find_contingency(opt);
  const ttestab::ContingencySet cont = ttestab::build_contingency(
      c, spec.fault_bus, {spec.line_from, spec.line_to}, spec.id);

  ttestab::CctConfig cfg = opt.cct;
  cfg.tte_fault_on = opt.tte_fault_on;
  const auto sim =
      ttestab::simulate_contingency_trajectories(cont, order, opt.t_clear, cfg);

  // Single file: fault-on samples, then the post-clearing phase (the
  // clearing instant appears once).
  ttestab::Trajectory merged = sim.fault_on;
  for (std::size_t k = 1; k < sim.post.t.size(); ++k) {
    merged.t.push_back(sim.post.t[k]);
    merged.x.push_back(sim.post.x[k]);
  }
  merged.diverged = sim.fault_on.diverged || sim.post.diverged;

  const auto dir = resolve_out_dir(opt.out_dir);
  write_file(dir, "simulate.csv", ttestab::trajectory_to_csv(merged, cont.postfault.m));
  std::printf("wrote %s\n", (dir / "simulate.csv").c_str());
  std::printf("contingency %d, order %s, cleared at %s s: %s\n", cont.id,
              order == ttestab::kOriginalOrder ? "original" : std::to_string(order).c_str(),
              ttestab::format_double(opt.t_clear).c_str(),
              sim.stable ? "stable" : "unstable");
}

void run_boundary(const MmOptions& opt) {
  const auto orders = parse_orders(opt.orders);
  ttestab::DirectionMode mode;
  if (opt.mode == "gaussian") {
    mode = ttestab::DirectionMode::kGaussian;
  } else if (opt.mode == "orthant") {
    mode = ttestab::DirectionMode::kPositiveOrthant;
  } else {
    throw ttestab::validation_error("--mode must be 'gaussian' or 'orthant'");
  }

  auto [net, sep] = select_network(opt);
  const auto camp = ttestab::boundary_campaign(net, sep, orders, opt.count, opt.seed,
                                               opt.search, mode, opt.threads);
  const auto dir = resolve_out_dir(opt.out_dir);
  write_file(dir, "boundary.csv", ttestab::campaign_to_csv(camp));
  write_file(dir, "boundary_hist.json",
             ttestab::campaign_histogram_json(camp, opt.bins) + "\n");
  std::printf("wrote %s\n", (dir / "boundary.csv").c_str());
  std::printf("wrote %s\n", (dir / "boundary_hist.json").c_str());
}

// Pastes the re-dispatched table to the right of the base table, matching
// rows by contingency.
std::string compare_csv(const ttestab::CctTable& base, const ttestab::CctTable& redis) {
  std::ostringstream os;
  os << "contingency,fault_bus,line_from,line_to,cct_base";
  for (int order : base.orders) os << ",base_norm_order_" << order;
  os << ",cct_redispatched";
  for (int order : redis.orders) os << ",redispatched_norm_order_" << order;
  os << "\n";
  for (std::size_t r = 0; r < base.rows.size(); ++r) {
    const auto& b = base.rows[r];
    const auto& d = redis.rows[r];
    os << b.contingency_id << ',' << b.fault_bus << ',' << b.tripped_line.first << ','
       << b.tripped_line.second << ',' << ttestab::format_double(b.cct_original);
    for (const auto& cell : b.by_order) os << ',' << ttestab::format_double(cell.normalized);
    os << ',' << ttestab::format_double(d.cct_original);
    for (const auto& cell : d.by_order) os << ',' << ttestab::format_double(cell.normalized);
    os << "\n";
  }
  return os.str();
}

void run_cct(const MmOptions& opt) {
  const auto orders = parse_orders(opt.orders);
  if (opt.contingencies_path.empty()) {
    throw ttestab::validation_error("--contingencies is required for this command");
  }
  const ttestab::CaseData c = ttestab::load_case(opt.case_path);
  const auto specs = ttestab::load_contingencies(opt.contingencies_path);
  ttestab::CctConfig cfg = opt.cct;
  cfg.tte_fault_on = opt.tte_fault_on;

  const ttestab::CctTable base = ttestab::cct_table(c, specs, orders, cfg);
  const auto dir = resolve_out_dir(opt.out_dir);
  if (!opt.compare_tables) {
    write_file(dir, "cct.csv", ttestab::cct_table_to_csv(base));
    std::printf("wrote %s\n", (dir / "cct.csv").c_str());
    return;
  }
  const ttestab::CaseData stressed =
      ttestab::redispatch(c, parse_redispatch(opt.redispatch_spec));
  const ttestab::CctTable redis = ttestab::cct_table(stressed, specs, orders, cfg);
  write_file(dir, "cct_compare.csv", compare_csv(base, redis));
  std::printf("wrote %s\n", (dir / "cct_compare.csv").c_str());
}

}  // namespace

void register_mm(CLI::App& app) {
  auto opt = std::make_shared<MmOptions>();
  CLI::App* mm = app.add_subcommand(
      "mm", "Multi-machine studies on a reduced network case");
  mm->require_subcommand(1);

  const auto add_common = [&](CLI::App* cmd, bool needs_conts) {
    cmd->add_option("--case", opt->case_path, "Case file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", opt->out_dir,
                    "Output directory (default: $TTESTAB_OUT_DIR or '.')");
    auto* conts = cmd->add_option("--contingencies", opt->contingencies_path,
                                  "Contingency list (CSV)");
    if (needs_conts) conts->check(CLI::ExistingFile);
  };

  CLI::App* expand = mm->add_subcommand(
      "expand", "Emit the reduced network and one surrogate's expansion coefficients");
  add_common(expand, false);
  expand->add_option("--order", opt->order_one, "Surrogate order, or 'original'");
  expand->add_option("--cont", opt->cont_id,
                     "Expand the post-clearing network of this contingency id");
  expand->callback([opt] { run_expand(*opt); });

  CLI::App* simulate = mm->add_subcommand(
      "simulate", "Simulate one fault-clearing experiment and save the trajectory");
  add_common(simulate, true);
  simulate->add_option("--cont", opt->cont_id, "Contingency id")->required();
  simulate->add_option("--order", opt->order_one,
                       "Post-clearing dynamics order, or 'original'");
  simulate->add_option("--t-clear", opt->t_clear, "Clearing time, s")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--dt", opt->cct.dt, "Integration step, s")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--horizon", opt->cct.horizon, "Post-clearing horizon, s")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--spread", opt->cct.spread,
                       "Endpoint pairwise angle threshold, rad")
      ->check(CLI::PositiveNumber);
  simulate->add_flag("--tte-fault-on", opt->tte_fault_on,
                     "Use the surrogate during the fault as well");
  simulate->callback([opt] { run_simulate(*opt); });

  CLI::App* boundary = mm->add_subcommand(
      "boundary", "Directional stability-boundary campaign with ratio summaries");
  add_common(boundary, false);
  boundary->add_option("--orders", opt->orders, "Surrogate orders, e.g. 3,8 or 2..9");
  boundary->add_option("--cont", opt->cont_id,
                       "Search the post-clearing network of this contingency id");
  boundary->add_option("--count", opt->count, "Direction count")
      ->check(CLI::PositiveNumber);
  boundary->add_option("--seed", opt->seed, "Direction stream seed");
  boundary->add_option("--mode", opt->mode, "Direction distribution: gaussian|orthant");
  boundary->add_option("--l0", opt->search.l0, "Initial distance")
      ->check(CLI::PositiveNumber);
  boundary->add_option("--s0", opt->search.s0, "Initial step")->check(CLI::PositiveNumber);
  boundary->add_option("--eps", opt->search.eps, "Step tolerance")
      ->check(CLI::PositiveNumber);
  boundary->add_option("--horizon", opt->search.horizon, "Simulation time per probe, s")
      ->check(CLI::PositiveNumber);
  boundary->add_option("--spread", opt->search.spread,
                       "Endpoint pairwise angle threshold, rad")
      ->check(CLI::PositiveNumber);
  boundary->add_option("--dt", opt->search.dt, "Integration step, s")
      ->check(CLI::PositiveNumber);
  boundary->add_option("--speed-weight", opt->search.speed_weight,
                       "rad/s applied per unit of direction speed component")
      ->check(CLI::PositiveNumber);
  boundary->add_option("--threads", opt->threads, "Worker thread bound")
      ->check(CLI::PositiveNumber);
  boundary->add_option("--bins", opt->bins, "Histogram bin count")
      ->check(CLI::PositiveNumber);
  boundary->callback([opt] { run_boundary(*opt); });

  CLI::App* cct = mm->add_subcommand(
      "cct", "Critical clearing times per contingency and surrogate order");
  add_common(cct, true);
  cct->add_option("--orders", opt->orders, "Surrogate orders, e.g. 2..9");
  cct->add_option("--dt", opt->cct.dt, "Integration step, s")->check(CLI::PositiveNumber);
  cct->add_option("--horizon", opt->cct.horizon, "Post-clearing horizon, s")
      ->check(CLI::PositiveNumber);
  cct->add_option("--spread", opt->cct.spread, "Endpoint pairwise angle threshold, rad")
      ->check(CLI::PositiveNumber);
  cct->add_option("--tol", opt->cct.tol, "Bisection width, s")->check(CLI::PositiveNumber);
  cct->add_option("--cap", opt->cct.cap, "Clearing-time cap, s")
      ->check(CLI::PositiveNumber);
  cct->add_option("--escalation", opt->cct.escalation, "Escalation increment, s")
      ->check(CLI::PositiveNumber);
  cct->add_flag("--tte-fault-on", opt->tte_fault_on,
                "Use the surrogate during the fault as well");
  cct->add_flag("--compare-tables", opt->compare_tables,
                "Also compute the table after re-dispatch and paste both side by side");
  cct->add_option("--redispatch", opt->redispatch_spec,
                  "Machine power overrides for --compare-tables, e.g. 2=2.0,3=1.0");
  cct->callback([opt] { run_cct(*opt); });
}

}  // namespace cli
