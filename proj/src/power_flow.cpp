#include "ttestab/power_flow.hpp"

#include <cmath>

#include "ttestab/errors.hpp"

namespace ttestab {

Eigen::MatrixXcd bus_admittance(const CaseData& c) {
  const auto n = static_cast<Eigen::Index>(c.buses.size());
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);
  for (const Branch& br : c.branches) {
    if (!br.in_service) continue;
    const auto i = static_cast<Eigen::Index>(c.bus_index(br.from));
    const auto j = static_cast<Eigen::Index>(c.bus_index(br.to));
    const std::complex<double> ys = 1.0 / std::complex<double>(br.r, br.x);
    const std::complex<double> ysh(0.0, br.b / 2.0);
    y(i, i) += ys + ysh;
    y(j, j) += ys + ysh;
    y(i, j) -= ys;
    y(j, i) -= ys;
  }
  return y;
}

namespace {

// Net scheduled active injection at a bus: machine output minus load.
double p_scheduled(const CaseData& c, std::size_t bus_idx) {
  const Bus& b = c.buses[bus_idx];
  double p = -b.pload;
  for (const Machine& m : c.machines) {
    if (m.bus == b.id) p += m.pm;
  }
  return p;
}

}  // namespace

PowerFlowResult solve_power_flow(const CaseData& c, double tol, int max_iter) {
  validate_case(c);
  const std::size_t n = c.buses.size();
  const Eigen::MatrixXcd ybus = bus_admittance(c);
  const Eigen::MatrixXd g = ybus.real();
  const Eigen::MatrixXd b = ybus.imag();

  // Unknowns: angle at every non-slack bus, magnitude at every PQ bus.
  std::vector<int> ang_of(n, -1), mag_of(n, -1);
  int n_ang = 0, n_mag = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (c.buses[i].type != BusType::Slack) ang_of[i] = n_ang++;
    if (c.buses[i].type == BusType::PQ) mag_of[i] = n_mag++;
  }
  const int dim = n_ang + n_mag;

  Eigen::VectorXd vm(n), va(n);
  for (std::size_t i = 0; i < n; ++i) {
    vm[static_cast<Eigen::Index>(i)] = c.buses[i].vm;
    va[static_cast<Eigen::Index>(i)] = c.buses[i].va;
  }

  Eigen::VectorXd p_calc(n), q_calc(n);
  auto compute_injections = [&]() {
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      double pi = 0.0, qi = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        const double th = va[ii] - va[jj];
        const double ct = std::cos(th), st = std::sin(th);
        pi += vm[jj] * (g(ii, jj) * ct + b(ii, jj) * st);
        qi += vm[jj] * (g(ii, jj) * st - b(ii, jj) * ct);
      }
      p_calc[ii] = vm[ii] * pi;
      q_calc[ii] = vm[ii] * qi;
    }
  };

  PowerFlowResult res;
  Eigen::VectorXd mis(dim);
  for (int iter = 0; iter <= max_iter; ++iter) {
    compute_injections();
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      if (ang_of[i] >= 0) mis[ang_of[i]] = p_scheduled(c, i) - p_calc[ii];
      if (mag_of[i] >= 0) mis[n_ang + mag_of[i]] = -c.buses[i].qload - q_calc[ii];
    }
    res.iterations = iter;
    res.max_mismatch = dim > 0 ? mis.lpNorm<Eigen::Infinity>() : 0.0;
    if (res.max_mismatch < tol) break;
    if (iter == max_iter) {
      throw numerical_error(c.name + ": power flow did not converge in " +
                            std::to_string(max_iter) + " iterations (mismatch " +
                            std::to_string(res.max_mismatch) + " pu)");
    }

    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      for (std::size_t j = 0; j < n; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        const double th = va[ii] - va[jj];
        const double ct = std::cos(th), st = std::sin(th);
        double dp_dth, dq_dth, dp_dv, dq_dv;
        if (i == j) {
          dp_dth = -q_calc[ii] - b(ii, ii) * vm[ii] * vm[ii];
          dq_dth = p_calc[ii] - g(ii, ii) * vm[ii] * vm[ii];
          dp_dv = p_calc[ii] / vm[ii] + g(ii, ii) * vm[ii];
          dq_dv = q_calc[ii] / vm[ii] - b(ii, ii) * vm[ii];
        } else {
          dp_dth = vm[ii] * vm[jj] * (g(ii, jj) * st - b(ii, jj) * ct);
          dq_dth = -vm[ii] * vm[jj] * (g(ii, jj) * ct + b(ii, jj) * st);
          dp_dv = vm[ii] * (g(ii, jj) * ct + b(ii, jj) * st);
          dq_dv = vm[ii] * (g(ii, jj) * st - b(ii, jj) * ct);
        }
        if (ang_of[i] >= 0 && ang_of[j] >= 0) jac(ang_of[i], ang_of[j]) = dp_dth;
        if (ang_of[i] >= 0 && mag_of[j] >= 0) jac(ang_of[i], n_ang + mag_of[j]) = dp_dv;
        if (mag_of[i] >= 0 && ang_of[j] >= 0) jac(n_ang + mag_of[i], ang_of[j]) = dq_dth;
        if (mag_of[i] >= 0 && mag_of[j] >= 0) jac(n_ang + mag_of[i], n_ang + mag_of[j]) = dq_dv;
      }
    }

    const Eigen::VectorXd dx = jac.partialPivLu().solve(mis);
    if (!dx.allFinite()) {
      throw numerical_error(c.name + ": singular power-flow Jacobian");
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      if (ang_of[i] >= 0) va[ii] += dx[ang_of[i]];
      if (mag_of[i] >= 0) vm[ii] += dx[n_ang + mag_of[i]];
    }
  }

  compute_injections();
  res.v.resize(n);
  res.p_inj.resize(n);
  res.q_inj.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    res.v[i] = std::polar(vm[ii], va[ii]);
    res.p_inj[i] = p_calc[ii];
    res.q_inj[i] = q_calc[ii];
  }
  return res;
}

void apply_solution(CaseData& c, const PowerFlowResult& r) {
  for (std::size_t i = 0; i < c.buses.size(); ++i) {
    c.buses[i].vm = std::abs(r.v[i]);
    c.buses[i].va = std::arg(r.v[i]);
  }
  // The slack machine absorbs the network losses.
  for (Machine& m : c.machines) {
    const std::size_t bi = c.bus_index(m.bus);
    if (c.buses[bi].type == BusType::Slack) {
      m.pm = r.p_inj[bi] + c.buses[bi].pload;
    }
  }
}

}  // namespace ttestab
