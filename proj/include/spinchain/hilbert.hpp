#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "spinchain/constants.hpp"

// Dense linear algebra over the 2^N chain Hilbert space. Site 1 is the
// leftmost tensor factor / most significant bit, so |1000> means "first spin
// flipped" and sigma_z |s> = (-1)^s |s>.

namespace spinchain {

using Complex = std::complex<double>;

enum class PauliAxis { X, Y, Z };

struct SpinState {
  Eigen::VectorXcd amplitudes;
  int n_sites = 0;

  int dim() const { return static_cast<int>(amplitudes.size()); }
};

struct TwoSpinDensity {
  Eigen::Matrix4cd rho;
  int site_i = 0;
  int site_j = 0;
};

// Bit position of 1-based `site` inside a basis index.
inline int site_bit(int site, int n_sites) { return n_sites - site; }

Eigen::Matrix2cd pauli_matrix(PauliAxis axis);

// |bits> with bits[0] on site 1 (MSB-first).
SpinState basis_state(const std::vector<int>& bits);

// I x ... x sigma_axis x ... x I with sigma at tensor slot `site`.
Eigen::MatrixXcd embed_pauli(PauliAxis axis, int site, int n_sites);

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// Reduce to the (i, j) pair, tracing out every other site. Output tensor
// order is (site i, site j).
TwoSpinDensity partial_trace_pair(const Eigen::MatrixXcd& rho, int i, int j, int n_sites);
TwoSpinDensity partial_trace_pair(const Eigen::VectorXcd& psi, int i, int j, int n_sites);

inline TwoSpinDensity partial_trace_pair(const SpinState& s, int i, int j) {
  return partial_trace_pair(s.amplitudes, i, j, s.n_sites);
}

double hermiticity_error(const Eigen::MatrixXcd& m);
bool is_normalized(const Eigen::VectorXcd& psi, double tol = kNormTol);

void check_sites(int n_sites, int max_sites = kDefaultMaxDenseSites);

}  // namespace spinchain
