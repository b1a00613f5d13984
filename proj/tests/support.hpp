#pragma once

#include <cmath>

#include "ttestab/network.hpp"

namespace testsupport {

// Two-machine embedding of the single-machine-infinite-bus system
//   ddot(delta) = -alpha*dot(delta) - beta*(sin(delta) - sin(delta_s)).
// Machine 2 is the infinite bus: enormous inertia pins its angle at zero, so
// machine 1 sees P_e = pmax*sin(delta_1) and the swing constants map to
// H_1 = pmax*omega_s/(2*beta), D_1 = 2*alpha*H_1.
inline ttestab::ReducedNetwork make_smib_net(double delta_s, double alpha, double beta,
                                             double pmax = 1.0) {
  const double omega_s = 2.0 * M_PI * 60.0;
  const double h1 = pmax * omega_s / (2.0 * beta);

  ttestab::ReducedNetwork net;
  net.m = 2;
  net.omega_s = omega_s;
  net.E = Eigen::VectorXd::Ones(2);
  net.G = Eigen::VectorXd::Zero(2);
  net.C = Eigen::MatrixXd::Zero(2, 2);
  net.C(0, 1) = pmax;
  net.C(1, 0) = pmax;
  net.D = Eigen::MatrixXd::Zero(2, 2);
  net.H = Eigen::VectorXd::Zero(2);
  net.H[0] = h1;
  net.H[1] = 1e15;
  net.Dmp = Eigen::VectorXd::Zero(2);
  net.Dmp[0] = 2.0 * alpha * h1;
  net.Pm = Eigen::VectorXd::Zero(2);
  net.Pm[0] = pmax * std::sin(delta_s);
  net.Pm[1] = -pmax * std::sin(delta_s);
  net.sep = Eigen::VectorXd::Zero(2);
  net.sep[0] = delta_s;
  return net;
}

// Interleaved state (delta_1, w_1, delta_2 = 0, w_2 = 0) for the embedding.
inline Eigen::VectorXd smib_state(double delta, double omega) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(4);
  x[0] = delta;
  x[1] = omega;
  return x;
}

}  // namespace testsupport
