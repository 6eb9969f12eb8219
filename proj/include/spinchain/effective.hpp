#pragma once

#include <functional>

#include "spinchain/chain.hpp"

// Closed-form time-averaged Hamiltonians and their numerical counterparts:
// H_bar = (1/t_c) Int U_c^dag(t) H U_c(t) dt over one control period, the
// lowest-order decoupling residual, and the next Magnus term.

namespace spinchain {

enum class EffectiveVariant { Hbar1, Hbar2, RotatedIsing, WithDrive1, WithDrive2 };

// The time-averaged chain Hamiltonian. Hbar1 applies for n_y != 2 n_x, Hbar2
// for n_y = 2 n_x (extra XY+YX cross terms), RotatedIsing is the rotated-field
// average of an Ising chain (lambda_2 = lambda_3 = 0 required). The WithDrive
// variants add the averaged transverse drive.
Eigen::MatrixXcd effective_chain(const CouplingSet& c, int n_sites, EffectiveVariant v);

// Averaged transverse drive (assumes n_z = n_y - n_x).
Eigen::MatrixXcd effective_drive(const CouplingSet& c, int n_sites, EffectiveVariant v);

// Quadrature of (1/t_c) Int U_c^dag H U_c dt with a midpoint rule on one
// period; grid-doubling convergence is asserted to 1e-9 relative. Requires an
// integer (periodic) spec.
Eigen::MatrixXcd numerical_time_average(const Eigen::MatrixXcd& H,
                                        const ControlFieldSpec& spec, int n_sites,
                                        int nodes = 512);

// Same, for an explicitly time-dependent integrand (e.g. the oscillating
// drive averaged jointly with the control frame).
Eigen::MatrixXcd numerical_time_average(
    const std::function<Eigen::MatrixXcd(double)>& H_of_t, const ControlFieldSpec& spec,
    int n_sites, int nodes = 512);

// Operator norm of (1/t_c) Int U_c^dag H_SB U_c dt with unit bath amplitudes.
double decoupling_residual(const ControlFieldSpec& spec, int n_sites, int nodes = 512);

// -(i/2 t_c) Int_0^{t_c} dt1 Int_0^{t1} dt2 [A(t1), B(t2)], evaluated with
// composite Gauss-Legendre panels (>= 256 effective nodes per dimension).
Eigen::MatrixXcd magnus_ordered_commutator_integral(
    const std::function<Eigen::MatrixXcd(double)>& A,
    const std::function<Eigen::MatrixXcd(double)>& B, double t_c, int panels = 64);

// Second Magnus term for the system part, A(t) = U_c^dag H U_c.
Eigen::MatrixXcd magnus_second_order(const Eigen::MatrixXcd& H, const ControlFieldSpec& spec,
                                     int n_sites, int panels = 64);

// Pi/4 x-rotation on every site (maps the averaged Ising chain to the XX
// model).
Eigen::MatrixXcd rotation_to_xx(int n_sites);

}  // namespace spinchain
