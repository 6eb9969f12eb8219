#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "spinchain/chain.hpp"
#include "spinchain/noise.hpp"

// Time evolution. The time-dependent path is classical fixed-step RK4 applied
// in the exact control frame: with U_c(t) known in closed form per site, the
// integrated equation is i d/dt phi = U_c^dag (H_chain + H_SB + H_d) U_c phi,
// which removes the stiff control fields from the ODE entirely. Lab-frame
// integration (use_control_frame = false) is kept for cross-checks.

namespace spinchain {

struct StateTrajectory {
  Eigen::VectorXd times;
  std::vector<Eigen::VectorXcd> states;      // state-valued trajectories
  std::vector<Eigen::MatrixXcd> densities;   // density-valued trajectories
  int n_sites = 0;
  double max_norm_drift = 0.0;    // max | ||psi|| - 1 | seen before renormalization
  double total_norm_drift = 0.0;  // accumulated | ||psi|| - 1 | over all steps
};

struct EvolutionPlan {
  int n_sites = 0;
  PauliSum static_terms;  // chain Hamiltonian plus any extra static fields
  std::optional<ControlFieldSpec> control;
  double gate_pulse_t_g = 0.0;  // > 0 adds the rotating pi-pulse on spin 1
  std::vector<std::array<double, 3>> drive_b;  // per-site transverse drive (empty = off)
  const NoiseTrajectory* noise = nullptr;
  bool bath_all_sites = true;
  Eigen::VectorXd out_times;  // strictly increasing, multiples of the step
  double step = 0.0;          // 0 -> t_c/100 with control fields, 1e-3 without
  bool use_control_frame = true;

  double default_step() const;
};

StateTrajectory evolve_time_dependent(const EvolutionPlan& plan, const SpinState& psi0);

// Spectral-decomposition propagation under a constant Hamiltonian.
StateTrajectory evolve_static(const Eigen::MatrixXcd& H, const SpinState& psi0,
                              const Eigen::VectorXd& times);

// rho(t) = sum_r w_r |psi_r(t)><psi_r(t)|, summed in realization order.
StateTrajectory ensemble_density(const std::vector<StateTrajectory>& trajectories,
                                 const std::vector<double>& weights);

// Same reduction but only for the (i, j) pair, without forming the full rho.
std::vector<Eigen::Matrix4cd> ensemble_pair_density(
    const std::vector<StateTrajectory>& trajectories, const std::vector<double>& weights,
    int i, int j);

}  // namespace spinchain
