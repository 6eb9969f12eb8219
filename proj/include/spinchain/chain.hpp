#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "spinchain/pauli.hpp"

// Builders for every Hamiltonian in play: the XYZ chain, the local bath
// coupling, and the static+oscillating control/drive/gate fields, together
// with the closed-form control propagator they integrate to.

namespace spinchain {

struct CouplingSet {
  // lambda_{j,k} per bond j = 1..N-1, k = x,y,z (hbar = 1 energy units)
  std::vector<std::array<double, 3>> bonds;
  // optional transverse drive amplitudes b_{j,k} per site j = 1..N
  std::vector<std::array<double, 3>> drive_b;
  double t_g = 0.0;  // single-spin gate duration, 0 = unset

  int n_sites() const { return static_cast<int>(bonds.size()) + 1; }
  bool has_drive() const { return !drive_b.empty(); }

  static CouplingSet uniform(double l1, double l2, double l3, int n_sites);
  // lambda_j = scale * sqrt(j(N-j)) on the x bonds only
  static CouplingSet transfer_ising(int n_sites, double scale = 1.0);
  // the engineered XX chain (lambda_j/2)(XX + YY), perfect transfer at pi/2
  static CouplingSet transfer_xx(int n_sites, double scale = 1.0);
};

enum class ControlVariant { None, Standard, Rotated, Gate };

// Static + oscillating control fields with period t_c. n_x/n_y are shared by
// all sites; the Gate variant applies (n_x1, n_y1) to site 1 instead. n_y may
// be non-integer (robustness sweeps) at the cost of strict periodicity.
struct ControlFieldSpec {
  ControlVariant variant = ControlVariant::Standard;
  double t_c = 0.01;
  double n_x = 1.0;
  double n_y = 2.0;
  double n_x1 = 0.0;  // site-1 values, Gate variant only
  double n_y1 = 0.0;
  int n_z = 0;  // drive-field integer (n_z = n_y - n_x for the closed forms)

  double omega() const;
  double nx_at(int site) const;
  double ny_at(int site) const;
  bool is_integer_spec(double tol = 1e-9) const;
  std::vector<std::string> validity_warnings() const;
};

Eigen::MatrixXcd chain_hamiltonian(const CouplingSet& c, int n_sites);
PauliSum chain_terms(const CouplingSet& c, int n_sites);

// Sum_j B_x sx^(j) + B_y sy^(j) + B_z sz^(j); couple_all_sites=false stops at
// site N-1 (the literal printed sum).
Eigen::MatrixXcd bath_hamiltonian(const std::array<double, 3>& B, int n_sites,
                                  bool couple_all_sites = true);
PauliSum bath_axis_terms(PauliAxis axis, int n_sites, bool couple_all_sites = true);

Eigen::MatrixXcd control_hamiltonian(const ControlFieldSpec& spec, int n_sites, double t);

// Transverse drive H_d(t); amplitudes from c.drive_b, frequencies from spec
// (n_y, n_x, n_z). The z component oscillates as cos(2 w n_z t).
Eigen::MatrixXcd drive_hamiltonian(const CouplingSet& c, const ControlFieldSpec& spec,
                                   int n_sites, double t);

// Control fields plus the rotating pi-pulse terms on spin 1.
Eigen::MatrixXcd gate_hamiltonian(const ControlFieldSpec& spec, double t_g, int n_sites,
                                  double t);

// Closed-form control propagator U_c(t), one 2x2 factor per site. When
// pulse_t_g > 0 the spin-1 factor picks up the extra exp(i pi t sx / (2 t_g)).
Eigen::Matrix2cd control_unitary_site(const ControlFieldSpec& spec, int site, double t,
                                      double pulse_t_g = 0.0);
Eigen::MatrixXcd control_unitary(const ControlFieldSpec& spec, int n_sites, double t,
                                 double pulse_t_g = 0.0);

struct GateIntegerCheck {
  bool ok = false;
  std::vector<std::string> violated;
};

// The 17 integer conditions for a decoupled single-spin gate.
GateIntegerCheck validate_gate_integers(int nx1, int ny1, int nx2, int ny2);

}  // namespace spinchain
