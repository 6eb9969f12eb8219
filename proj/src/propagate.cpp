#include "spinchain/propagate.hpp"

#include <cmath>
#include <stdexcept>

#include "spinchain/hilbert.hpp"

namespace spinchain {

namespace {

constexpr Complex kMinusI{0.0, -1.0};

// Applies the tensor product of per-site 2x2 matrices (adjoint optionally).
void apply_local_unitaries(const std::vector<Eigen::Matrix2cd>& us, bool adjoint,
                           const Eigen::VectorXcd& in, Eigen::VectorXcd& out,
                           int n_sites) {
  out = in;
  const std::size_t dim = std::size_t{1} << n_sites;
  for (int s = 1; s <= n_sites; ++s) {
    Eigen::Matrix2cd u = us[s - 1];
    if (adjoint) u = u.adjoint().eval();
    const std::size_t mask = std::size_t{1} << site_bit(s, n_sites);
    for (std::size_t n = 0; n < dim; ++n) {
      if (n & mask) continue;
      const Complex a = out[n];
      const Complex b = out[n | mask];
      out[n] = u(0, 0) * a + u(0, 1) * b;
      out[n | mask] = u(1, 0) * a + u(1, 1) * b;
    }
  }
}

struct TimeTerm {
  PauliSum op;
  std::function<double(double)> coeff;
};

// Control and gate-pulse fields as coefficient * PauliSum pieces for the
// lab-frame path.
std::vector<TimeTerm> lab_frame_control_terms(const EvolutionPlan& plan) {
  std::vector<TimeTerm> terms;
  if (!plan.control || plan.control->variant == ControlVariant::None) return terms;
  const ControlFieldSpec spec = *plan.control;
  const int n = plan.n_sites;
  const double w = spec.omega();

  auto add = [&](PauliSum op, std::function<double(double)> f) {
    terms.push_back(TimeTerm{std::move(op), std::move(f)});
  };
  auto site_sum = [&](PauliAxis axis, int first, int last) {
    PauliSum s(n);
    for (int i = first; i <= last; ++i) s.add(1.0, {{i, axis}});
    return s;
  };

  // Site groups with identical integers: {1} and {2..N} for Gate, everyone
  // otherwise.
  struct Group { int first, last; double nx, ny; };
  std::vector<Group> groups;
  if (spec.variant == ControlVariant::Gate) {
    groups.push_back({1, 1, spec.n_x1, spec.n_y1});
    if (n > 1) groups.push_back({2, n, spec.n_x, spec.n_y});
  } else {
    groups.push_back({1, n, spec.n_x, spec.n_y});
  }

  for (const auto& g : groups) {
    const double nx = g.nx, ny = g.ny;
    if (spec.variant == ControlVariant::Rotated) {
      add(site_sum(PauliAxis::Y, g.first, g.last),
          [w, nx, ny](double t) { return w * ny * std::sin(2.0 * w * nx * t); });
      add(site_sum(PauliAxis::Z, g.first, g.last),
          [w, nx, ny](double t) { return w * ny * std::cos(2.0 * w * nx * t); });
    } else {
      add(site_sum(PauliAxis::Z, g.first, g.last),
          [w, nx, ny](double t) { return w * ny * std::sin(2.0 * w * nx * t); });
      add(site_sum(PauliAxis::Y, g.first, g.last),
          [w, nx, ny](double t) { return -w * ny * std::cos(2.0 * w * nx * t); });
    }
    add(site_sum(PauliAxis::X, g.first, g.last), [w, nx](double) { return -w * nx; });
  }

  if (plan.gate_pulse_t_g > 0.0) {
    const double tg = plan.gate_pulse_t_g;
    const double nx1 = spec.nx_at(1), ny1 = spec.ny_at(1);
    const double gpre = -0.5 * M_PI / tg;
    add(site_sum(PauliAxis::X, 1, 1),
        [w, ny1, gpre](double t) { return gpre * std::cos(2.0 * w * ny1 * t); });
    add(site_sum(PauliAxis::Z, 1, 1), [w, nx1, ny1, gpre](double t) {
      return gpre * std::sin(2.0 * w * ny1 * t) * std::cos(2.0 * w * nx1 * t);
    });
    add(site_sum(PauliAxis::Y, 1, 1), [w, nx1, ny1, gpre](double t) {
      return gpre * std::sin(2.0 * w * ny1 * t) * std::sin(2.0 * w * nx1 * t);
    });
  }
  return terms;
}

std::vector<TimeTerm> drive_terms(const EvolutionPlan& plan) {
  std::vector<TimeTerm> terms;
  if (plan.drive_b.empty()) return terms;
  if (!plan.control) throw std::invalid_argument("drive requires a control spec (frequencies)");
  if (static_cast<int>(plan.drive_b.size()) != plan.n_sites)
    throw std::invalid_argument("drive amplitude list length mismatch");
  const double w = plan.control->omega();
  const double nx = plan.control->n_x, ny = plan.control->n_y;
  const double nz = plan.control->n_z;
  const int n = plan.n_sites;
  const std::array<PauliAxis, 3> axes{PauliAxis::X, PauliAxis::Y, PauliAxis::Z};
  const std::array<double, 3> freq{2.0 * w * ny, 2.0 * w * nx, 2.0 * w * nz};
  for (int k = 0; k < 3; ++k) {
    PauliSum op(n);
    bool any = false;
    for (int j = 1; j <= n; ++j) {
      if (plan.drive_b[j - 1][k] == 0.0) continue;
      op.add(plan.drive_b[j - 1][k], {{j, axes[k]}});
      any = true;
    }
    if (!any) continue;
    const double f = freq[k];
    terms.push_back(TimeTerm{std::move(op), [f](double t) { return std::cos(f * t); }});
  }
  return terms;
}

}  // namespace

double EvolutionPlan::default_step() const {
  if (control && control->variant != ControlVariant::None) return control->t_c / 100.0;
  return 1e-3;
}

StateTrajectory evolve_time_dependent(const EvolutionPlan& plan, const SpinState& psi0) {
  const int n = plan.n_sites;
  const std::size_t dim = std::size_t{1} << n;
  if (psi0.n_sites != n || psi0.amplitudes.size() != static_cast<Eigen::Index>(dim))
    throw std::invalid_argument("evolve_time_dependent: state dimension mismatch");
  if (!is_normalized(psi0.amplitudes))
    throw std::invalid_argument("evolve_time_dependent: initial state not normalized");
  if (plan.out_times.size() == 0)
    throw std::invalid_argument("evolve_time_dependent: empty output grid");
  for (Eigen::Index i = 1; i < plan.out_times.size(); ++i)
    if (plan.out_times[i] <= plan.out_times[i - 1])
      throw std::invalid_argument("evolve_time_dependent: output grid not increasing");

  const bool has_control = plan.control && plan.control->variant != ControlVariant::None;
  const double h = plan.step > 0.0 ? plan.step : plan.default_step();
  if (has_control && h > plan.control->t_c / 50.0 + 1e-15)
    throw std::invalid_argument("evolve_time_dependent: step too large relative to t_c");

  const double t_end = plan.out_times[plan.out_times.size() - 1];
  if (plan.noise && plan.noise->times.size() > 0 &&
      plan.noise->times[plan.noise->times.size() - 1] < t_end - 1e-9)
    throw std::invalid_argument("evolve_time_dependent: noise trajectory too short");

  // Output times must sit on the integration grid.
  std::vector<long> out_steps(plan.out_times.size());
  for (Eigen::Index i = 0; i < plan.out_times.size(); ++i) {
    const double m = plan.out_times[i] / h;
    out_steps[i] = std::lround(m);
    if (std::abs(m - out_steps[i]) > 1e-6)
      throw std::invalid_argument("evolve_time_dependent: output grid not on the step grid");
  }

  const bool framed = has_control && plan.use_control_frame;
  std::vector<TimeTerm> time_terms = drive_terms(plan);
  if (has_control && !framed) {
    auto ctrl = lab_frame_control_terms(plan);
    time_terms.insert(time_terms.end(), ctrl.begin(), ctrl.end());
  }

  std::array<PauliSum, 3> bath{bath_axis_terms(PauliAxis::X, n, plan.bath_all_sites),
                               bath_axis_terms(PauliAxis::Y, n, plan.bath_all_sites),
                               bath_axis_terms(PauliAxis::Z, n, plan.bath_all_sites)};

  // Scratch buffers for the derivative evaluation.
  Eigen::VectorXcd w1(dim), w2(dim), w3(dim);
  std::vector<Eigen::Matrix2cd> us(n);
  std::array<double, 3> B{0.0, 0.0, 0.0};

  auto frame_at = [&](double t) {
    if (plan.control->variant == ControlVariant::Gate) {
      us[0] = control_unitary_site(*plan.control, 1, t, plan.gate_pulse_t_g);
      if (n > 1) {
        const Eigen::Matrix2cd rest = control_unitary_site(*plan.control, 2, t, 0.0);
        for (int s = 2; s <= n; ++s) us[s - 1] = rest;
      }
    } else {
      const Eigen::Matrix2cd u1 = control_unitary_site(*plan.control, 1, t, plan.gate_pulse_t_g);
      const Eigen::Matrix2cd rest =
          (plan.gate_pulse_t_g > 0.0 && n > 1)
              ? control_unitary_site(*plan.control, 2, t, 0.0)
              : u1;
      us[0] = u1;
      for (int s = 2; s <= n; ++s) us[s - 1] = rest;
    }
  };

  // dpsi/dt = -i H(t) psi, with the noise amplitudes B held per step.
  auto deriv = [&](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
    const Eigen::VectorXcd* src = &y;
    if (framed) {
      frame_at(t);
      apply_local_unitaries(us, false, y, w1, n);
      src = &w1;
    }
    w2.setZero();
    plan.static_terms.apply_add(*src, w2);
    if (plan.noise)
      for (int k = 0; k < 3; ++k)
        if (B[k] != 0.0) bath[k].apply_add(*src, w2, B[k]);
    for (const auto& term : time_terms) term.op.apply_add(*src, w2, term.coeff(t));
    if (framed) {
      apply_local_unitaries(us, true, w2, w3, n);
      dy = kMinusI * w3;
    } else {
      dy = kMinusI * w2;
    }
  };

  StateTrajectory traj;
  traj.n_sites = n;
  traj.times = plan.out_times;
  traj.states.reserve(out_steps.size());

  Eigen::VectorXcd y = psi0.amplitudes;
  Eigen::VectorXcd k1(dim), k2(dim), k3(dim), k4(dim), yt(dim);

  auto emit = [&](double t) {
    if (framed) {
      frame_at(t);
      apply_local_unitaries(us, false, y, w1, n);
      traj.states.push_back(w1);
    } else {
      traj.states.push_back(y);
    }
  };

  long step_index = 0;
  std::size_t out_index = 0;
  if (out_steps[0] == 0) {
    emit(0.0);
    ++out_index;
  }
  const long last_step = out_steps.back();
  while (step_index < last_step) {
    const double t = step_index * h;
    if (plan.noise) B = plan.noise->at(t);
    deriv(t, y, k1);
    yt = y + (0.5 * h) * k1;
    deriv(t + 0.5 * h, yt, k2);
    yt = y + (0.5 * h) * k2;
    deriv(t + 0.5 * h, yt, k3);
    yt = y + h * k3;
    deriv(t + h, yt, k4);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double nrm = y.norm();
    traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(nrm - 1.0));
    traj.total_norm_drift += std::abs(nrm - 1.0);
    y /= nrm;
    ++step_index;
    while (out_index < out_steps.size() && out_steps[out_index] == step_index) {
      emit(step_index * h);
      ++out_index;
    }
  }
  return traj;
}

StateTrajectory evolve_static(const Eigen::MatrixXcd& H, const SpinState& psi0,
                              const Eigen::VectorXd& times) {
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if (hermiticity_error(H) > 1e-10 * scale)
    throw std::invalid_argument("evolve_static: Hamiltonian is not Hermitian");
  if (H.rows() != psi0.amplitudes.size())
    throw std::invalid_argument("evolve_static: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("evolve_static: eigensolver failed");
  const Eigen::VectorXcd c0 = es.eigenvectors().adjoint() * psi0.amplitudes;

  StateTrajectory traj;
  traj.n_sites = psi0.n_sites;
  traj.times = times;
  traj.states.reserve(times.size());
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    Eigen::VectorXcd phase =
        (kMinusI * times[i] * es.eigenvalues().array().cast<Complex>()).exp().matrix();
    traj.states.push_back(es.eigenvectors() * (phase.array() * c0.array()).matrix());
  }
  return traj;
}

namespace {

void check_ensemble(const std::vector<StateTrajectory>& trajectories,
                    const std::vector<double>& weights) {
  if (trajectories.empty()) throw std::invalid_argument("ensemble: no trajectories");
  if (weights.size() != trajectories.size())
    throw std::invalid_argument("ensemble: weight count mismatch");
  for (const auto& tr : trajectories) {
    if (tr.states.size() != trajectories.front().states.size() ||
        tr.times.size() != trajectories.front().times.size() ||
        (tr.times - trajectories.front().times).cwiseAbs().maxCoeff() > 1e-12)
      throw std::invalid_argument("ensemble: time grids differ");
  }
}

}  // namespace

StateTrajectory ensemble_density(const std::vector<StateTrajectory>& trajectories,
                                 const std::vector<double>& weights) {
  check_ensemble(trajectories, weights);
  StateTrajectory out;
  out.n_sites = trajectories.front().n_sites;
  out.times = trajectories.front().times;
  const Eigen::Index dim = trajectories.front().states.front().size();
  out.densities.reserve(out.times.size());
  for (std::size_t k = 0; k < trajectories.front().states.size(); ++k) {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t r = 0; r < trajectories.size(); ++r)
      rho.noalias() += weights[r] * (trajectories[r].states[k] *
                                     trajectories[r].states[k].adjoint());
    out.densities.push_back(std::move(rho));
  }
  for (const auto& tr : trajectories) {
    out.max_norm_drift = std::max(out.max_norm_drift, tr.max_norm_drift);
    out.total_norm_drift = std::max(out.total_norm_drift, tr.total_norm_drift);
  }
  return out;
}

std::vector<Eigen::Matrix4cd> ensemble_pair_density(
    const std::vector<StateTrajectory>& trajectories, const std::vector<double>& weights,
    int i, int j) {
  check_ensemble(trajectories, weights);
  const int n = trajectories.front().n_sites;
  std::vector<Eigen::Matrix4cd> out;
  out.reserve(trajectories.front().states.size());
  for (std::size_t k = 0; k < trajectories.front().states.size(); ++k) {
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    for (std::size_t r = 0; r < trajectories.size(); ++r)
      rho += weights[r] * partial_trace_pair(trajectories[r].states[k], i, j, n).rho;
    out.push_back(rho);
  }
  return out;
}

}  // namespace spinchain
