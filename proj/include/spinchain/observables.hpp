#pragma once

#include <string>

#include "spinchain/hilbert.hpp"

namespace spinchain {

struct ObservableSeries {
  Eigen::VectorXd times;
  Eigen::VectorXd values;
  std::string label;
};

// <target| rho |target>; a pure-state rho is treated as rank-1.
double transfer_fidelity(const Eigen::MatrixXcd& rho, const Eigen::VectorXcd& target);
double transfer_fidelity(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& target);

// Wootters concurrence of a two-spin density matrix. Eigenvalues within
// -1e-10 of zero are clipped before the pipeline; inputs more negative than
// kConcurrenceNegativityLimit are rejected.
inline constexpr double kConcurrenceNegativityLimit = 1e-6;
double concurrence(const Eigen::Matrix4cd& rho2);
inline double concurrence(const TwoSpinDensity& d) { return concurrence(d.rho); }

double purity(const Eigen::MatrixXcd& rho);

// C_R = (N - 1) C
double rescaled_concurrence(double c, int n_sites);

}  // namespace spinchain
