#include "ttestab/dynamics.hpp"

#include <cmath>
#include <string>

#include "ttestab/errors.hpp"
#include "ttestab/trunc_series.hpp"

namespace ttestab {

TteSystem build_tte_system(const ReducedNetwork& net, const Eigen::VectorXd& sep, int order,
                           bool check_equilibrium) {
  if (order != kOriginalOrder && (order < 1 || order > kMaxTteOrder)) {
    throw validation_error("build_tte_system: order " + std::to_string(order) +
                           " outside {original, 1.." + std::to_string(kMaxTteOrder) + "}");
  }
  if (sep.size() != net.m) {
    throw validation_error("build_tte_system: expansion point dimension " +
                           std::to_string(sep.size()) + " does not match machine count " +
                           std::to_string(net.m));
  }
  if (check_equilibrium) {
    for (int i = 0; i < net.m; ++i) {
      const double resid = std::abs(net.Pm[i] - net.electrical_power(i, sep));
      if (!(resid < 1e-6)) {
        throw validation_error("build_tte_system: expansion point is not an equilibrium; "
                               "machine " + std::to_string(i + 1) + " residual " +
                               std::to_string(resid) + " pu");
      }
    }
  }

  TteSystem sys;
  sys.base = net;
  sys.order = order;
  sys.expansion_sep = sep;
  sys.alpha.resize(net.m);
  sys.gain.resize(net.m);
  sys.e2g.resize(net.m);
  for (int i = 0; i < net.m; ++i) {
    sys.alpha[i] = net.Dmp[i] / (2.0 * net.H[i]);
    sys.gain[i] = net.omega_s / (2.0 * net.H[i]);
    sys.e2g[i] = net.E[i] * net.E[i] * net.G[i];
  }
  if (order != kOriginalOrder) {
    const int stride = order + 1;
    sys.pair_coeffs.assign(static_cast<std::size_t>(net.m) * net.m * stride, 0.0);
    for (int i = 0; i < net.m; ++i) {
      for (int j = 0; j < net.m; ++j) {
        if (j == i) continue;
        const TruncSeries s = pair_coefficients(net.C(i, j), net.D(i, j), sep[i] - sep[j], order);
        double* dst = &sys.pair_coeffs[static_cast<std::size_t>(i * net.m + j) * stride];
        for (int k = 0; k <= order; ++k) dst[k] = s.coeffs[static_cast<std::size_t>(k)];
      }
    }
  }
  return sys;
}

void eval_rhs(const TteSystem& sys, const double* x, double* dx) {
  const int m = sys.base.m;
  if (sys.order == kOriginalOrder) {
    for (int i = 0; i < m; ++i) {
      double pe = sys.e2g[i];
      const double di = x[2 * i];
      for (int j = 0; j < m; ++j) {
        if (j == i) continue;
        const double th = di - x[2 * j];
        pe += sys.base.C(i, j) * std::sin(th) + sys.base.D(i, j) * std::cos(th);
      }
      dx[2 * i] = x[2 * i + 1];
      dx[2 * i + 1] = -sys.alpha[i] * x[2 * i + 1] + sys.gain[i] * (sys.base.Pm[i] - pe);
    }
    return;
  }
  const int stride = sys.order + 1;
  for (int i = 0; i < m; ++i) {
    double pe = sys.e2g[i];
    const double ui = x[2 * i] - sys.expansion_sep[i];
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      const double xij = ui - (x[2 * j] - sys.expansion_sep[j]);
      const double* ck = &sys.pair_coeffs[static_cast<std::size_t>(i * m + j) * stride];
      double acc = ck[sys.order];
      for (int k = sys.order - 1; k >= 0; --k) acc = acc * xij + ck[k];
      pe += acc;
    }
    dx[2 * i] = x[2 * i + 1];
    dx[2 * i + 1] = -sys.alpha[i] * x[2 * i + 1] + sys.gain[i] * (sys.base.Pm[i] - pe);
  }
}

Eigen::VectorXd rhs(const TteSystem& sys, const Eigen::VectorXd& state) {
  if (state.size() != sys.dim()) {
    throw validation_error("rhs: state dimension " + std::to_string(state.size()) +
                           " does not match 2m = " + std::to_string(sys.dim()));
  }
  Eigen::VectorXd dx(state.size());
  eval_rhs(sys, state.data(), dx.data());
  return dx;
}

double angle_spread(const Eigen::VectorXd& state, int m) {
  double spread = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      spread = std::max(spread, std::abs(state[2 * i] - state[2 * j]));
    }
  }
  return spread;
}

double angle_spread(const Eigen::VectorXd& state, int m, const Eigen::VectorXd& sep) {
  double spread = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      spread = std::max(spread,
                        std::abs((state[2 * i] - sep[i]) - (state[2 * j] - sep[j])));
    }
  }
  return spread;
}

}  // namespace ttestab
