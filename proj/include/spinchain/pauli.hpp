#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spinchain/hilbert.hpp"

// Lightweight Pauli-string representation for operator assembly. The dense
// matrix form is available for diagnostics; apply_add() is the matrix-free
// path the propagator uses (O(2^N) per term instead of O(4^N)).

namespace spinchain {

struct PauliFactor {
  int site = 1;  // 1-based
  PauliAxis axis = PauliAxis::X;
};

struct PauliTerm {
  Complex coeff{0.0, 0.0};
  std::vector<PauliFactor> factors;  // empty = identity term
};

struct PauliSum {
  int n_sites = 0;
  std::vector<PauliTerm> terms;

  PauliSum() = default;
  explicit PauliSum(int n) : n_sites(n) {}

  void add(Complex coeff, std::initializer_list<PauliFactor> factors) {
    terms.push_back(PauliTerm{coeff, std::vector<PauliFactor>(factors)});
  }
  void add_term(const PauliTerm& t) { terms.push_back(t); }
  void append(const PauliSum& other, Complex scale = 1.0);

  Eigen::MatrixXcd to_matrix() const;

  // out += scale * (this) * in
  void apply_add(const Eigen::VectorXcd& in, Eigen::VectorXcd& out, Complex scale = 1.0) const;
};

}  // namespace spinchain
