#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "ttestab/report.hpp"
#include "ttestab/smib.hpp"

namespace cli {

namespace {

struct SmibOptions {
  std::string out_dir;
  std::string orders = "2..9";
  double delta_s = M_PI / 6.0;
  double step = 0.001;
  double pmax = 1.0;
  double lo = 0.0;
  double hi = M_PI;
  int samples = 361;
};

std::string uep_rows(double delta_s, const std::vector<int>& orders) {
  std::ostringstream os;
  os << "delta_s,order,exists,value,error\n";
  ttestab::smib::SmibParams p;
  p.delta_s = delta_s;
  for (int order : orders) {
    const auto est = ttestab::smib::uep_numeric(p, order);
    os << ttestab::format_double(delta_s) << ',' << order << ',' << (est.exists ? 1 : 0)
       << ',' << ttestab::format_double(est.exists ? est.value : std::nan("")) << ','
       << ttestab::format_double(est.exists ? est.error : std::nan("")) << "\n";
  }
  return os.str();
}

void run_uep(const SmibOptions& opt) {
  const auto orders = parse_orders(opt.orders);
  for (int o : orders) {
    if (o < 2 || o > ttestab::kMaxTteOrder) {
      throw ttestab::validation_error("uep orders must lie in [2, 15]");
    }
  }
  const auto dir = resolve_out_dir(opt.out_dir);
  write_file(dir, "uep.csv", uep_rows(opt.delta_s, orders));
  std::printf("wrote %s\n", (dir / "uep.csv").c_str());
}

void run_sweep(const SmibOptions& opt) {
  const auto orders = parse_orders(opt.orders);
  const auto rows = ttestab::smib::sweep_ueps(orders, opt.step);
  std::ostringstream os;
  os << "delta_s,order,exists,value,error\n";
  for (const auto& r : rows) {
    os << ttestab::format_double(r.delta_s) << ',' << r.order << ',' << (r.exists ? 1 : 0)
       << ',' << ttestab::format_double(r.exists ? r.value : std::nan("")) << ','
       << ttestab::format_double(r.exists ? r.error : std::nan("")) << "\n";
  }
  const auto dir = resolve_out_dir(opt.out_dir);
  write_file(dir, "sweep.csv", os.str());
  std::printf("wrote %s\n", (dir / "sweep.csv").c_str());
}

void run_thresholds(const SmibOptions& opt) {
  std::ostringstream os;
  os << "order,delta_s_threshold\n";
  for (int order : {5, 6}) {
    os << order << ',' << ttestab::format_double(ttestab::smib::existence_threshold(order))
       << "\n";
  }
  const auto dir = resolve_out_dir(opt.out_dir);
  write_file(dir, "thresholds.csv", os.str());
  std::printf("wrote %s\n", (dir / "thresholds.csv").c_str());
}

void run_pdelta(const SmibOptions& opt) {
  const auto orders = parse_orders(opt.orders);
  const auto table = ttestab::smib::pdelta_curve(opt.delta_s, opt.pmax, orders, opt.lo,
                                                opt.hi, opt.samples);
  std::ostringstream os;
  os << "delta,pe";
  for (int o : table.orders) os << ",pe_order_" << o;
  os << "\n";
  for (std::size_t j = 0; j < table.delta.size(); ++j) {
    os << ttestab::format_double(table.delta[j]) << ','
       << ttestab::format_double(table.pe[j]);
    for (std::size_t i = 0; i < table.orders.size(); ++i) {
      os << ',' << ttestab::format_double(table.pen[i][j]);
    }
    os << "\n";
  }
  const auto dir = resolve_out_dir(opt.out_dir);
  write_file(dir, "pdelta.csv", os.str());
  std::printf("wrote %s\n", (dir / "pdelta.csv").c_str());
}

void run_claims(const SmibOptions& opt) {
  const auto report = ttestab::smib::check_ordering(opt.step);
  std::printf("checked %ld grid points, %zu ordering violations\n", report.points_checked,
              report.violations.size());
  if (!report.violations.empty()) {
    std::ostringstream os;
    os << "delta_s,detail\n";
    for (const auto& v : report.violations) {
      os << ttestab::format_double(v.delta_s) << ",\"" << v.detail << "\"\n";
    }
    const auto dir = resolve_out_dir(opt.out_dir);
    write_file(dir, "claims_violations.csv", os.str());
    std::printf("wrote %s\n", (dir / "claims_violations.csv").c_str());
    throw ttestab::validation_error("surrogate ordering violated at " +
                                    std::to_string(report.violations.size()) +
                                    " grid points");
  }
}

}  // namespace

void register_smib(CLI::App& app) {
  auto opt = std::make_shared<SmibOptions>();
  CLI::App* smib = app.add_subcommand(
      "smib", "Single-machine-infinite-bus surrogate equilibrium studies");
  smib->require_subcommand(1);

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", opt->out_dir,
                    "Output directory (default: $TTESTAB_OUT_DIR or '.')");
  };

  CLI::App* uep = smib->add_subcommand(
      "uep", "Approximate unstable-equilibrium angles at one operating point");
  add_common(uep);
  uep->add_option("--delta-s", opt->delta_s, "Stable equilibrium angle, rad")
      ->check(CLI::Range(1e-9, M_PI / 2 - 1e-9));
  uep->add_option("--orders", opt->orders, "Surrogate orders, e.g. 2,3 or 2..9");
  uep->callback([opt] { run_uep(*opt); });

  CLI::App* sweep = smib->add_subcommand(
      "sweep", "Approximate unstable equilibria over the whole operating range");
  add_common(sweep);
  sweep->add_option("--orders", opt->orders, "Surrogate orders, e.g. 2,3 or 2..9");
  sweep->add_option("--step", opt->step, "delta_s grid spacing, rad")
      ->check(CLI::PositiveNumber);
  sweep->callback([opt] { run_sweep(*opt); });

  CLI::App* thresholds = smib->add_subcommand(
      "thresholds", "Operating angles where the order-5/6 equilibrium estimates appear");
  add_common(thresholds);
  thresholds->callback([opt] { run_thresholds(*opt); });

  CLI::App* pdelta = smib->add_subcommand(
      "pdelta", "Power-angle curve against its polynomial surrogates");
  add_common(pdelta);
  pdelta->add_option("--delta-s", opt->delta_s, "Expansion angle, rad")
      ->check(CLI::Range(1e-9, M_PI / 2 - 1e-9));
  pdelta->add_option("--pmax", opt->pmax, "Peak electrical power, pu")
      ->check(CLI::PositiveNumber);
  pdelta->add_option("--orders", opt->orders, "Surrogate orders");
  pdelta->add_option("--lo", opt->lo, "Curve start angle, rad");
  pdelta->add_option("--hi", opt->hi, "Curve end angle, rad");
  pdelta->add_option("--samples", opt->samples, "Sample count")->check(CLI::PositiveNumber);
  pdelta->callback([opt] { run_pdelta(*opt); });

  CLI::App* claims = smib->add_subcommand(
      "claims",
      "Verify the conservative/optimistic ordering of surrogate equilibria; "
      "nonzero exit on any violation");
  add_common(claims);
  claims->add_option("--step", opt->step, "delta_s grid spacing, rad")
      ->check(CLI::PositiveNumber);
  claims->callback([opt] { run_claims(*opt); });
}

}  // namespace cli
