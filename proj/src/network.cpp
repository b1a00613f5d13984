#include "ttestab/network.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "ttestab/errors.hpp"
#include "ttestab/power_flow.hpp"

namespace ttestab {

double ReducedNetwork::electrical_power(int i, const Eigen::VectorXd& delta) const {
  double p = E[i] * E[i] * G[i];
  for (int j = 0; j < m; ++j) {
    if (j == i) continue;
    const double th = delta[i] - delta[j];
    p += C(i, j) * std::sin(th) + D(i, j) * std::cos(th);
  }
  return p;
}

Eigen::MatrixXcd kron_reduce(const Eigen::MatrixXcd& y,
                             const std::vector<Eigen::Index>& keep) {
  const Eigen::Index n = y.rows();
  std::vector<bool> kept(static_cast<std::size_t>(n), false);
  for (Eigen::Index k : keep) kept[static_cast<std::size_t>(k)] = true;
  std::vector<Eigen::Index> elim;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!kept[static_cast<std::size_t>(i)]) elim.push_back(i);
  }
  const auto nk = static_cast<Eigen::Index>(keep.size());
  const auto ne = static_cast<Eigen::Index>(elim.size());
  if (ne == 0) {
    Eigen::MatrixXcd out(nk, nk);
    for (Eigen::Index a = 0; a < nk; ++a)
      for (Eigen::Index b = 0; b < nk; ++b) out(a, b) = y(keep[a], keep[b]);
    return out;
  }

  Eigen::MatrixXcd ykk(nk, nk), yke(nk, ne), yek(ne, nk), yee(ne, ne);
  for (Eigen::Index a = 0; a < nk; ++a) {
    for (Eigen::Index b = 0; b < nk; ++b) ykk(a, b) = y(keep[a], keep[b]);
    for (Eigen::Index b = 0; b < ne; ++b) yke(a, b) = y(keep[a], elim[b]);
  }
  for (Eigen::Index a = 0; a < ne; ++a) {
    for (Eigen::Index b = 0; b < nk; ++b) yek(a, b) = y(elim[a], keep[b]);
    for (Eigen::Index b = 0; b < ne; ++b) yee(a, b) = y(elim[a], elim[b]);
  }

  Eigen::FullPivLU<Eigen::MatrixXcd> lu(yee);
  if (!lu.isInvertible()) {
    std::string nodes;
    for (Eigen::Index e : elim) nodes += " " + std::to_string(e);
    throw numerical_error("kron_reduce: eliminated block is numerically singular; positions:" +
                          nodes);
  }
  return ykk - yke * lu.solve(yek);
}

namespace {

// Augmented admittance over (network buses + machine internal nodes) for the
// reduction topology.  Branch selection honors the optional trip; loads and
// machine reactances are always attached.
Eigen::MatrixXcd augmented_admittance(const CaseData& c,
                                      const std::optional<std::pair<int, int>>& tripped_line) {
  const auto n = static_cast<Eigen::Index>(c.buses.size());
  const auto m = static_cast<Eigen::Index>(c.machines.size());
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n + m, n + m);
  bool trip_pending = tripped_line.has_value();
  for (const Branch& br : c.branches) {
    if (!br.in_service) continue;
    if (trip_pending) {
      const auto [a, b] = *tripped_line;
      if ((br.from == a && br.to == b) || (br.from == b && br.to == a)) {
        trip_pending = false;
        continue;
      }
    }
    const auto i = static_cast<Eigen::Index>(c.bus_index(br.from));
    const auto j = static_cast<Eigen::Index>(c.bus_index(br.to));
    const std::complex<double> ys = 1.0 / std::complex<double>(br.r, br.x);
    const std::complex<double> ysh(0.0, br.b / 2.0);
    y(i, i) += ys + ysh;
    y(j, j) += ys + ysh;
    y(i, j) -= ys;
    y(j, i) -= ys;
  }
  if (trip_pending) {
    throw validation_error(c.name + ": tripped line " + std::to_string(tripped_line->first) +
                           "-" + std::to_string(tripped_line->second) + " not found in service");
  }
  for (std::size_t bi = 0; bi < c.buses.size(); ++bi) {
    const Bus& b = c.buses[bi];
    if (b.pload != 0.0 || b.qload != 0.0) {
      const double v2 = b.vm * b.vm;
      y(static_cast<Eigen::Index>(bi), static_cast<Eigen::Index>(bi)) +=
          std::complex<double>(b.pload / v2, -b.qload / v2);
    }
  }
  for (std::size_t k = 0; k < c.machines.size(); ++k) {
    const auto bi = static_cast<Eigen::Index>(c.bus_index(c.machines[k].bus));
    const auto gi = n + static_cast<Eigen::Index>(k);
    const std::complex<double> ym = 1.0 / std::complex<double>(0.0, c.machines[k].xdp);
    y(gi, gi) += ym;
    y(bi, bi) += ym;
    y(gi, bi) -= ym;
    y(bi, gi) -= ym;
  }
  return y;
}

}  // namespace

ReducedNetwork reduce_network(const CaseData& c, std::optional<int> grounded_bus,
                              std::optional<std::pair<int, int>> tripped_line) {
  validate_case(c);
  const std::size_t n = c.buses.size();
  const std::size_t m = c.machines.size();

  // Generator terminal conditions from the stored power-flow solution,
  // evaluated on the case's own topology (the trip only alters the
  // reduction topology, not the operating point the EMFs come from).
  Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    v[static_cast<Eigen::Index>(i)] = std::polar(c.buses[i].vm, c.buses[i].va);
  }
  const Eigen::MatrixXcd ybus = bus_admittance(c);
  const Eigen::VectorXcd i_inj = ybus * v;

  ReducedNetwork net;
  net.m = static_cast<int>(m);
  net.E.resize(net.m);
  net.sep.resize(net.m);
  net.H.resize(net.m);
  net.Dmp.resize(net.m);
  net.Pm.resize(net.m);
  net.omega_s = c.omega_s;
  std::vector<std::complex<double>> emf(m);
  for (std::size_t k = 0; k < m; ++k) {
    const Machine& mc = c.machines[k];
    const auto bi = static_cast<Eigen::Index>(c.bus_index(mc.bus));
    const Bus& b = c.buses[static_cast<std::size_t>(bi)];
    const std::complex<double> s_inj = v[bi] * std::conj(i_inj[bi]);
    const std::complex<double> s_gen = s_inj + std::complex<double>(b.pload, b.qload);
    const std::complex<double> i_gen = std::conj(s_gen) / std::conj(v[bi]);
    const std::complex<double> e = v[bi] + std::complex<double>(0.0, mc.xdp) * i_gen;
    emf[k] = e;
    net.E[static_cast<Eigen::Index>(k)] = std::abs(e);
    net.sep[static_cast<Eigen::Index>(k)] = std::arg(e);
    net.H[static_cast<Eigen::Index>(k)] = mc.h;
    net.Dmp[static_cast<Eigen::Index>(k)] = mc.d;
    // The EMF source injects exactly the generator's terminal active power
    // (x'd is lossless), so this P_m balances P_e at the stored angles.
    net.Pm[static_cast<Eigen::Index>(k)] = s_gen.real();
  }

  Eigen::MatrixXcd yaug = augmented_admittance(c, tripped_line);

  // Node layout: 0..n-1 network buses, n..n+m-1 machine internal nodes.
  // Grounding deletes the faulted bus's row/column; elimination removes all
  // remaining network buses.
  std::vector<Eigen::Index> live;
  std::optional<Eigen::Index> grounded_pos;
  if (grounded_bus) {
    grounded_pos = static_cast<Eigen::Index>(c.bus_index(*grounded_bus));
  }
  for (Eigen::Index i = 0; i < yaug.rows(); ++i) {
    if (grounded_pos && i == *grounded_pos) continue;
    live.push_back(i);
  }
  Eigen::MatrixXcd ylive(static_cast<Eigen::Index>(live.size()),
                         static_cast<Eigen::Index>(live.size()));
  for (std::size_t a = 0; a < live.size(); ++a)
    for (std::size_t b = 0; b < live.size(); ++b)
      ylive(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          yaug(live[a], live[b]);

  std::vector<Eigen::Index> keep;
  for (std::size_t a = 0; a < live.size(); ++a) {
    if (live[a] >= static_cast<Eigen::Index>(n)) keep.push_back(static_cast<Eigen::Index>(a));
  }
  Eigen::MatrixXcd yred;
  try {
    yred = kron_reduce(ylive, keep);
  } catch (const numerical_error&) {
    std::string buses;
    for (std::size_t a = 0; a < live.size(); ++a) {
      if (live[a] < static_cast<Eigen::Index>(n)) {
        buses += " " + std::to_string(c.buses[static_cast<std::size_t>(live[a])].id);
      }
    }
    throw numerical_error(c.name + ": elimination block singular for buses:" + buses);
  }

  net.G.resize(net.m);
  net.C = Eigen::MatrixXd::Zero(net.m, net.m);
  net.D = Eigen::MatrixXd::Zero(net.m, net.m);
  for (int i = 0; i < net.m; ++i) {
    net.G[i] = yred(i, i).real();
    // Mirror the upper triangle so the coupling matrices are exactly
    // symmetric despite elimination round-off.
    for (int j = i + 1; j < net.m; ++j) {
      const double cij = net.E[i] * net.E[j] * yred(i, j).imag();
      const double dij = net.E[i] * net.E[j] * yred(i, j).real();
      net.C(i, j) = cij;
      net.C(j, i) = cij;
      net.D(i, j) = dij;
      net.D(j, i) = dij;
    }
  }
  return net;
}

Eigen::VectorXd solve_sep(const ReducedNetwork& net, const Eigen::VectorXd& guess) {
  if (guess.size() != net.m) {
    throw validation_error("solve_sep: guess dimension " + std::to_string(guess.size()) +
                           " does not match machine count " + std::to_string(net.m));
  }
  const int m = net.m;
  Eigen::VectorXd delta = guess;
  const int mu = m - 1;  // machine 1's angle is the fixed reference

  constexpr int kMaxIter = 50;
  constexpr double kNewtonTol = 1e-12;
  if (mu > 0) {
    Eigen::VectorXd r(mu);
    Eigen::MatrixXd jac(mu, mu);
    auto residual = [&]() {
      for (int i = 0; i < mu; ++i) {
        r[i] = net.Pm[i + 1] - net.electrical_power(i + 1, delta);
      }
      return r.lpNorm<Eigen::Infinity>();
    };
    auto newton_step = [&](int iter) {
      for (int i = 0; i < mu; ++i) {
        const int mi = i + 1;
        double diag = 0.0;
        for (int j = 0; j < m; ++j) {
          if (j == mi) continue;
          const double th = delta[mi] - delta[j];
          diag += net.C(mi, j) * std::cos(th) - net.D(mi, j) * std::sin(th);
        }
        for (int k = 0; k < mu; ++k) {
          const int mk = k + 1;
          if (mk == mi) {
            jac(i, k) = diag;
          } else {
            const double th = delta[mi] - delta[mk];
            jac(i, k) = -net.C(mi, mk) * std::cos(th) + net.D(mi, mk) * std::sin(th);
          }
        }
      }
      // Newton step: d(Pm - Pe)/ddelta = -dPe/ddelta, so delta += jac^-1 r.
      const Eigen::VectorXd step = jac.partialPivLu().solve(r);
      if (!step.allFinite()) {
        throw numerical_error("solve_sep: singular Jacobian at iteration " +
                              std::to_string(iter));
      }
      delta.tail(mu) += step;
    };
    int iter = 0;
    for (;; ++iter) {
      if (residual() < kNewtonTol) break;
      if (iter == kMaxIter) {
        throw numerical_error("solve_sep: Newton did not converge in " +
                              std::to_string(kMaxIter) + " iterations (residual " +
                              std::to_string(r.lpNorm<Eigen::Infinity>()) + " pu)");
      }
      newton_step(iter);
    }
    // One polishing step drives the residual to the rounding floor, which
    // downstream surrogate construction relies on for its zero-RHS guarantee.
    residual();
    newton_step(iter);
  }

  for (int i = 0; i < m; ++i) {
    const double resid = std::abs(net.Pm[i] - net.electrical_power(i, delta));
    if (!(resid < 1e-8)) {
      throw numerical_error("solve_sep: inconsistent dispatch; machine " +
                            std::to_string(i + 1) + " residual " + std::to_string(resid) +
                            " pu after convergence");
    }
  }
  return delta;
}

namespace {

CaseData resolve_case(CaseData c, bool flat_start) {
  if (flat_start) {
    for (Bus& b : c.buses) {
      b.va = 0.0;
      if (b.type == BusType::PQ) b.vm = 1.0;
    }
  }
  const PowerFlowResult pf = solve_power_flow(c);
  apply_solution(c, pf);
  return c;
}

}  // namespace

ContingencySet build_contingency(const CaseData& c, int fault_bus,
                                 std::pair<int, int> tripped_line, int id) {
  if (fault_bus != tripped_line.first && fault_bus != tripped_line.second) {
    throw validation_error(c.name + ": fault bus " + std::to_string(fault_bus) +
                           " is not an endpoint of line " +
                           std::to_string(tripped_line.first) + "-" +
                           std::to_string(tripped_line.second));
  }
  ContingencySet cs;
  cs.id = id;
  cs.fault_bus = fault_bus;
  cs.tripped_line = tripped_line;
  cs.prefault = reduce_network(c);
  cs.fault_on = reduce_network(c, fault_bus);

  CaseData post = c;
  const auto bidx = post.find_branch(tripped_line.first, tripped_line.second);
  if (!bidx || !post.branches[*bidx].in_service) {
    throw validation_error(c.name + ": tripped line " + std::to_string(tripped_line.first) +
                           "-" + std::to_string(tripped_line.second) + " not found in service");
  }
  post.branches[*bidx].in_service = false;
  // Warm start from the prefault solution; the tripped topology stays
  // connected for (N-1) cases so Newton converges in a few steps.
  post = resolve_case(std::move(post), /*flat_start=*/false);
  cs.postfault = reduce_network(post);
  cs.postfault_sep = solve_sep(cs.postfault, cs.postfault.sep);
  return cs;
}

CaseData redispatch(const CaseData& c, const std::map<int, double>& pm_by_machine) {
  CaseData out = c;
  for (const auto& [num, pm] : pm_by_machine) {
    if (num < 1 || num > static_cast<int>(out.machines.size())) {
      throw validation_error(c.name + ": redispatch references machine " +
                             std::to_string(num) + " of " +
                             std::to_string(out.machines.size()));
    }
    out.machines[static_cast<std::size_t>(num - 1)].pm = pm;
  }
  return resolve_case(std::move(out), /*flat_start=*/true);
}

}  // namespace ttestab
