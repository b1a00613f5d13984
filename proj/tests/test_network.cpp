#include <cmath>
#include <complex>
#include <random>
#include <string>

#include "doctest.h"
#include "ttestab/case_data.hpp"
#include "ttestab/errors.hpp"
#include "ttestab/network.hpp"
#include "ttestab/power_flow.hpp"

using namespace ttestab;

namespace {

const std::string kCasePath = std::string(TTESTAB_DATA_DIR) + "/ieee9.json";
const std::string kContPath = std::string(TTESTAB_DATA_DIR) + "/contingencies9.csv";

const CaseData& base_case() {
  static const CaseData c = load_case(kCasePath);
  return c;
}

}  // namespace

TEST_CASE("stored power-flow solution is already converged") {
  const PowerFlowResult pf = solve_power_flow(base_case());
  CHECK(pf.iterations == 0);
  CHECK(pf.max_mismatch < 1e-12);
  // Slack output: the classical 9-bus solution.
  const std::size_t slack = base_case().bus_index(1);
  CHECK(pf.p_inj[slack] == doctest::Approx(0.71641).epsilon(2e-4));
  CHECK(pf.q_inj[slack] == doctest::Approx(0.27046).epsilon(1e-3));
}

TEST_CASE("flat-start power flow reproduces the frozen solution") {
  CaseData c = base_case();
  for (Bus& b : c.buses) {
    b.va = 0.0;
    if (b.type == BusType::PQ) b.vm = 1.0;
  }
  const PowerFlowResult pf = solve_power_flow(c);
  CHECK(pf.iterations <= 6);
  for (std::size_t i = 0; i < c.buses.size(); ++i) {
    CHECK(std::abs(pf.v[i] - std::polar(base_case().buses[i].vm, base_case().buses[i].va)) <
          1e-10);
  }
  // Published operating point for the transmission buses.
  const std::size_t b4 = c.bus_index(4);
  const std::size_t b5 = c.bus_index(5);
  CHECK(std::abs(pf.v[b4]) == doctest::Approx(1.02579).epsilon(1e-4));
  CHECK(std::arg(pf.v[b4]) * 180.0 / M_PI == doctest::Approx(-2.2168).epsilon(1e-3));
  CHECK(std::abs(pf.v[b5]) == doctest::Approx(0.99563).epsilon(1e-4));
}

TEST_CASE("power flow flags non-convergence") {
  CaseData c = base_case();
  c.machines[1].pm = 100.0;  // infeasible dispatch
  CHECK_THROWS_AS(solve_power_flow(c), numerical_error);
}

TEST_CASE("prefault reduction balances power at the stored angles") {
  const ReducedNetwork net = reduce_network(base_case());
  REQUIRE(net.m == 3);
  for (int i = 0; i < net.m; ++i) {
    CHECK(std::abs(net.Pm[i] - net.electrical_power(i, net.sep)) < 1e-6);
  }
  // Classical-model internal voltages for the 9-bus case.
  CHECK(net.E[0] == doctest::Approx(1.05664).epsilon(1e-4));
  CHECK(net.E[1] == doctest::Approx(1.05020).epsilon(1e-4));
  CHECK(net.E[2] == doctest::Approx(1.01697).epsilon(1e-4));
  CHECK(net.sep[0] * 180.0 / M_PI == doctest::Approx(2.2716).epsilon(1e-3));
  CHECK(net.sep[1] * 180.0 / M_PI == doctest::Approx(19.7316).epsilon(1e-3));
  CHECK(net.sep[2] * 180.0 / M_PI == doctest::Approx(13.1664).epsilon(1e-3));
  CHECK(net.H[0] == doctest::Approx(23.64));
  CHECK(net.Dmp[0] == doctest::Approx(net.H[0]));
}

TEST_CASE("coupling matrices are exactly symmetric with zero diagonal") {
  const ReducedNetwork net = reduce_network(base_case());
  for (int i = 0; i < net.m; ++i) {
    CHECK(net.C(i, i) == 0.0);
    CHECK(net.D(i, i) == 0.0);
    for (int j = 0; j < net.m; ++j) {
      CHECK(net.C(i, j) == net.C(j, i));
      CHECK(net.D(i, j) == net.D(j, i));
    }
  }
  // Sine coupling dominates cosine coupling for transmission-grade X/R.
  CHECK(net.C(0, 1) > 0.0);
  CHECK(net.C(0, 1) > std::abs(net.D(0, 1)));
}

TEST_CASE("grounding the fault bus starves electrical output") {
  const ReducedNetwork pre = reduce_network(base_case());
  const ReducedNetwork flt = reduce_network(base_case(), 4);
  // Accelerating power at the prefault angles is positive under the fault.
  CHECK(flt.Pm[0] - flt.electrical_power(0, pre.sep) > 0.0);
  // Machine 1 sits behind bus 4, so its coupling collapses hardest.
  CHECK(flt.C(0, 1) < 0.1 * pre.C(0, 1));
  // EMFs and mechanical power carry over from the prefault solution.
  for (int i = 0; i < 3; ++i) {
    CHECK(flt.E[i] == pre.E[i]);
    CHECK(flt.Pm[i] == pre.Pm[i]);
  }
}

TEST_CASE("tripping a line perturbs every retained coupling") {
  const ReducedNetwork pre = reduce_network(base_case());
  const ReducedNetwork post = reduce_network(base_case(), std::nullopt, {{4, 6}});
  bool changed = false;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (post.C(i, j) != pre.C(i, j) || post.D(i, j) != pre.D(i, j)) changed = true;
    }
  }
  CHECK(changed);
  // The trip weakens the direct 1-3 path (bus 4 to bus 6/9 side).
  CHECK(post.C(0, 2) < pre.C(0, 2));
  CHECK_THROWS_WITH_AS(reduce_network(base_case(), std::nullopt, {{1, 9}}),
                       doctest::Contains("not found in service"), validation_error);
}

TEST_CASE("kron reduction preserves port behavior on random perturbations") {
  const Eigen::MatrixXcd ybase = bus_admittance(base_case());
  const Eigen::Index n = ybase.rows();
  std::mt19937_64 rng(20260825);
  std::normal_distribution<double> dist(0.0, 0.02);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXcd y = ybase;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i; j < n; ++j) {
        const std::complex<double> d(dist(rng), dist(rng));
        y(i, j) += d;
        if (j != i) y(j, i) += d;
      }
    }
    std::vector<Eigen::Index> keep{0, 1 + trial % 4, 6 + trial % 3};
    const Eigen::MatrixXcd yred = kron_reduce(y, keep);

    // Drive the kept ports with random currents, zero elsewhere; the full
    // solve and the reduced matrix must agree on the port voltages.
    Eigen::VectorXcd inj = Eigen::VectorXcd::Zero(n);
    for (std::size_t k = 0; k < keep.size(); ++k) {
      inj[keep[k]] = std::complex<double>(dist(rng) * 50.0, dist(rng) * 50.0);
    }
    const Eigen::VectorXcd v = y.fullPivLu().solve(inj);
    Eigen::VectorXcd vk(static_cast<Eigen::Index>(keep.size()));
    Eigen::VectorXcd ik(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
      vk[static_cast<Eigen::Index>(k)] = v[keep[k]];
      ik[static_cast<Eigen::Index>(k)] = inj[keep[k]];
    }
    const double rel = (yred * vk - ik).norm() / (ik.norm() + 1e-30);
    CHECK(rel < 1e-10);
  }
}

TEST_CASE("kron reduction rejects a singular elimination block") {
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(3, 3);
  y(0, 0) = 1.0;  // node 1 and 2 fully disconnected: elimination block singular
  CHECK_THROWS_AS(kron_reduce(y, {0}), numerical_error);
}

TEST_CASE("solve_sep returns an equilibrium guess unchanged") {
  const ReducedNetwork net = reduce_network(base_case());
  const Eigen::VectorXd sep = solve_sep(net, net.sep);
  CHECK((sep - net.sep).lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("solve_sep converges on the post-fault network from prefault angles") {
  const ReducedNetwork pre = reduce_network(base_case());
  CaseData post_case = base_case();
  post_case.branches[*post_case.find_branch(4, 6)].in_service = false;
  const PowerFlowResult pf = solve_power_flow(post_case);
  apply_solution(post_case, pf);
  const ReducedNetwork post = reduce_network(post_case);

  const Eigen::VectorXd sep = solve_sep(post, pre.sep);
  for (int i = 0; i < post.m; ++i) {
    CHECK(std::abs(post.Pm[i] - post.electrical_power(i, sep)) < 1e-8);
  }
  // Reference convention: machine 1 stays at the guess angle.
  CHECK(sep[0] == pre.sep[0]);
}

TEST_CASE("solve_sep reports non-convergence and inconsistent dispatch distinctly") {
  ReducedNetwork net = reduce_network(base_case());

  SUBCASE("undeliverable machine-2 power never converges") {
    net.Pm[1] += 10.0;
    CHECK_THROWS_WITH_AS(solve_sep(net, net.sep), doctest::Contains("did not converge"),
                         numerical_error);
  }
  SUBCASE("inflated machine-1 power converges elsewhere but fails the residual check") {
    net.Pm[0] += 10.0;
    CHECK_THROWS_WITH_AS(solve_sep(net, net.sep), doctest::Contains("inconsistent dispatch"),
                         numerical_error);
  }
  SUBCASE("wrong guess dimension") {
    CHECK_THROWS_AS(solve_sep(net, Eigen::VectorXd::Zero(2)), validation_error);
  }
}

TEST_CASE("build_contingency assembles consistent network triples") {
  const ContingencySet cs = build_contingency(base_case(), 4, {4, 6}, 1);
  CHECK(cs.id == 1);
  CHECK(cs.fault_bus == 4);
  // Post-fault SEP is a verified equilibrium of the post-fault network.
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(cs.postfault.Pm[i] - cs.postfault.electrical_power(i, cs.postfault_sep)) <
          1e-8);
  }
  // PV machine setpoints survive the post-fault re-solve.
  CHECK(cs.postfault.Pm[1] == doctest::Approx(1.63).epsilon(1e-9));
  CHECK(cs.postfault.Pm[2] == doctest::Approx(0.85).epsilon(1e-9));
  // Fault-on keeps prefault EMFs; the faulted bus is gone from the coupling.
  CHECK(cs.fault_on.E[0] == cs.prefault.E[0]);
  CHECK(cs.fault_on.C(0, 1) < cs.prefault.C(0, 1));
}

TEST_CASE("fault bus must sit on the tripped line") {
  CHECK_THROWS_WITH_AS(build_contingency(base_case(), 4, {7, 8}),
                       doctest::Contains("not an endpoint"), validation_error);
}

TEST_CASE("all twelve bundled contingencies build cleanly") {
  for (const auto& ct : load_contingencies(kContPath)) {
    const ContingencySet cs =
        build_contingency(base_case(), ct.fault_bus, {ct.line_from, ct.line_to}, ct.id);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(cs.postfault.Pm[i] -
                     cs.postfault.electrical_power(i, cs.postfault_sep)) < 1e-8);
    }
  }
}

TEST_CASE("redispatch reproduces the stressed operating point") {
  const CaseData re = redispatch(base_case(), {{2, 2.00}, {3, 1.00}});
  CHECK(re.machines[1].pm == doctest::Approx(2.00));
  CHECK(re.machines[2].pm == doctest::Approx(1.00));
  // Slack backs off to about 22.55 MW.
  CHECK(re.machines[0].pm == doctest::Approx(0.2255).epsilon(5e-3));
  // The stressed case still reduces to a balanced network.
  const ReducedNetwork net = reduce_network(re);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(net.Pm[i] - net.electrical_power(i, net.sep)) < 1e-6);
  }
}

TEST_CASE("identity redispatch returns the case unchanged") {
  const CaseData re = redispatch(base_case(), {});
  for (std::size_t i = 0; i < re.buses.size(); ++i) {
    CHECK(std::abs(re.buses[i].vm - base_case().buses[i].vm) < 1e-10);
    CHECK(std::abs(re.buses[i].va - base_case().buses[i].va) < 1e-10);
  }
  for (std::size_t i = 0; i < re.machines.size(); ++i) {
    CHECK(std::abs(re.machines[i].pm - base_case().machines[i].pm) < 1e-10);
  }
}

TEST_CASE("infeasible redispatch raises a numerical error") {
  CHECK_THROWS_AS(redispatch(base_case(), {{2, 100.0}}), numerical_error);
  CHECK_THROWS_AS(redispatch(base_case(), {{7, 1.0}}), validation_error);
}
