#pragma once

#include <utility>
#include <vector>

#include "spinchain/effective.hpp"
#include "spinchain/observables.hpp"

// Polynomial-cost dynamics for coupling sets with 2 l1 + l2 + l3 = 0, where
// the averaged chain maps to free fermions under the Jordan-Wigner
// transformation. Spin-spin correlators come out as Pfaffians of
// contraction matrices; the two-spin density matrix and concurrence follow.
// The initial state is the fully polarized chain |11...1> (the fermionic
// vacuum in this convention).

namespace spinchain {

struct QuadraticForm {
  Eigen::MatrixXd J;  // symmetric hopping pattern, -1 on the off-diagonals
  Eigen::MatrixXd K;  // antisymmetric pairing pattern, +gamma above / -gamma below
  double gamma = 1.0;
  double phi = 0.0;
  double lambda1 = 1.0;
  int n_sites = 0;
  EffectiveVariant variant = EffectiveVariant::Hbar1;
};

// Hbar1 forces gamma = 1, phi = 0; Hbar2 uses
// gamma = sqrt(l1^2 + (l1+l2)^2)/l1, phi = atan[(l1+l2)/l1].
// The caller guarantees l3 = -2 l1 - l2 upstream.
QuadraticForm build_quadratic_form(double lambda1, double lambda2, int n_sites,
                                   EffectiveVariant variant);

struct FreeFermionSolution {
  Eigen::VectorXd Lambda;  // quasiparticle energies lambda1 * sqrt(eig), >= 0 for lambda1 > 0
  Eigen::MatrixXd Phi, Psi;     // row-orthonormal combinations Phi = g + e^{i phi} h, ...
  Eigen::MatrixXd g;            // real part of the Bogoliubov transformation
  Eigen::MatrixXcd h;           // e^{-i phi} (Phi - Psi)/2
  Eigen::MatrixXcd g_inv, h_inv;  // inverse transformation (g', h')
  double lambda1 = 1.0;
  double phi = 0.0;
  int n_sites = 0;

  // Canonical anticommutation residuals, for tests.
  double canonical_error() const;
};

FreeFermionSolution solve_free_fermion(const QuadraticForm& q);

// Pfaffian of an even-dimensional antisymmetric matrix via skew
// tridiagonalization with partial pivoting. Pf(M)^2 = det(M).
Complex pfaffian(Eigen::MatrixXcd M);
// Recursive cofactor expansion, cross-check for dimension <= 8.
Complex pfaffian_expansion(const Eigen::MatrixXcd& M);

struct PairCorrelators {
  int l = 0, m = 0;       // l < m
  Complex xx, yy, xy, yx, zz;
  double z_l = 0.0, z_m = 0.0;  // single-site <sigma_z>
};

struct CorrelatorSet {
  double t = 0.0;
  int n_sites = 0;
  Eigen::MatrixXcd A, B, X, Y;     // Heisenberg-picture mode mixing
  Eigen::MatrixXcd F, S, T, W;     // <QP>, <QQ>, <PP>, <PQ> blocks
  std::vector<PairCorrelators> pairs;
};

CorrelatorSet correlators_at(const FreeFermionSolution& sol, double t,
                             const std::vector<std::pair<int, int>>& pairs);

TwoSpinDensity two_spin_density_jw(const CorrelatorSet& cs, std::pair<int, int> pair);

ObservableSeries jw_concurrence_curve(double lambda1, double lambda2, int n_sites,
                                      EffectiveVariant variant, std::pair<int, int> pair,
                                      const Eigen::VectorXd& times);

// Pair density matrices along a time grid (the concurrence curve plus the
// states behind it).
std::vector<Eigen::Matrix4cd> jw_pair_density_curve(double lambda1, double lambda2,
                                                    int n_sites, EffectiveVariant variant,
                                                    std::pair<int, int> pair,
                                                    const Eigen::VectorXd& times);

}  // namespace spinchain
