#include "spinchain/chain.hpp"

#include <cmath>
#include <stdexcept>

namespace spinchain {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr std::array<PauliAxis, 3> kAxes = {PauliAxis::X, PauliAxis::Y, PauliAxis::Z};
}  // namespace

CouplingSet CouplingSet::uniform(double l1, double l2, double l3, int n_sites) {
  if (n_sites < 2) throw std::invalid_argument("CouplingSet: need at least 2 sites");
  CouplingSet c;
  c.bonds.assign(n_sites - 1, {l1, l2, l3});
  return c;
}

CouplingSet CouplingSet::transfer_ising(int n_sites, double scale) {
  if (n_sites < 2) throw std::invalid_argument("CouplingSet: need at least 2 sites");
  CouplingSet c;
  for (int j = 1; j < n_sites; ++j) {
    const double l = scale * std::sqrt(double(j) * double(n_sites - j));
    c.bonds.push_back({l, 0.0, 0.0});
  }
  return c;
}

CouplingSet CouplingSet::transfer_xx(int n_sites, double scale) {
  if (n_sites < 2) throw std::invalid_argument("CouplingSet: need at least 2 sites");
  CouplingSet c;
  for (int j = 1; j < n_sites; ++j) {
    const double l = 0.5 * scale * std::sqrt(double(j) * double(n_sites - j));
    c.bonds.push_back({l, l, 0.0});
  }
  return c;
}

double ControlFieldSpec::omega() const {
  if (t_c <= 0.0) throw std::invalid_argument("ControlFieldSpec: t_c must be positive");
  return 2.0 * kPi / t_c;
}

double ControlFieldSpec::nx_at(int site) const {
  return (variant == ControlVariant::Gate && site == 1) ? n_x1 : n_x;
}

double ControlFieldSpec::ny_at(int site) const {
  return (variant == ControlVariant::Gate && site == 1) ? n_y1 : n_y;
}

bool ControlFieldSpec::is_integer_spec(double tol) const {
  auto near_int = [tol](double v) { return std::abs(v - std::round(v)) <= tol; };
  bool ok = near_int(n_x) && near_int(n_y);
  if (variant == ControlVariant::Gate) ok = ok && near_int(n_x1) && near_int(n_y1);
  return ok;
}

std::vector<std::string> ControlFieldSpec::validity_warnings() const {
  std::vector<std::string> w;
  if (variant == ControlVariant::None) return w;
  if (!is_integer_spec())
    w.push_back("non-integer control integers: fields are not strictly t_c-periodic");
  if (std::abs(n_x - n_y) < 1e-12)
    w.push_back("n_x == n_y: lowest-order decoupling condition is violated");
  if (variant == ControlVariant::Gate && std::abs(n_x1 - n_y1) < 1e-12)
    w.push_back("n_x(1) == n_y(1): site-1 decoupling condition is violated");
  return w;
}

PauliSum chain_terms(const CouplingSet& c, int n_sites) {
  if (c.n_sites() != n_sites)
    throw std::invalid_argument("chain_terms: coupling list does not match n_sites");
  PauliSum h(n_sites);
  for (int j = 1; j < n_sites; ++j) {
    const auto& l = c.bonds[j - 1];
    for (int k = 0; k < 3; ++k) {
      if (l[k] == 0.0) continue;
      h.add(l[k], {{j, kAxes[k]}, {j + 1, kAxes[k]}});
    }
  }
  return h;
}

Eigen::MatrixXcd chain_hamiltonian(const CouplingSet& c, int n_sites) {
  if (n_sites < 2) throw std::invalid_argument("chain_hamiltonian: need at least 2 sites");
  return chain_terms(c, n_sites).to_matrix();
}

PauliSum bath_axis_terms(PauliAxis axis, int n_sites, bool couple_all_sites) {
  PauliSum h(n_sites);
  const int last = couple_all_sites ? n_sites : n_sites - 1;
  for (int j = 1; j <= last; ++j) h.add(1.0, {{j, axis}});
  return h;
}

Eigen::MatrixXcd bath_hamiltonian(const std::array<double, 3>& B, int n_sites,
                                  bool couple_all_sites) {
  PauliSum sum(n_sites);
  for (int k = 0; k < 3; ++k) {
    if (B[k] == 0.0) continue;
    sum.append(bath_axis_terms(kAxes[k], n_sites, couple_all_sites), B[k]);
  }
  return sum.to_matrix();
}

Eigen::MatrixXcd control_hamiltonian(const ControlFieldSpec& spec, int n_sites, double t) {
  const double w = spec.omega();
  PauliSum h(n_sites);
  switch (spec.variant) {
    case ControlVariant::None:
      break;
    case ControlVariant::Standard:
    case ControlVariant::Gate:
      // w n_y [sin(2 w n_x t) sz - cos(2 w n_x t) sy] - w n_x sx, per site
      for (int i = 1; i <= n_sites; ++i) {
        const double nx = spec.nx_at(i), ny = spec.ny_at(i);
        h.add(w * ny * std::sin(2.0 * w * nx * t), {{i, PauliAxis::Z}});
        h.add(-w * ny * std::cos(2.0 * w * nx * t), {{i, PauliAxis::Y}});
        h.add(-w * nx, {{i, PauliAxis::X}});
      }
      break;
    case ControlVariant::Rotated:
      // w n_y [sin(2 w n_x t) sy + cos(2 w n_x t) sz] - w n_x sx, per site
      for (int i = 1; i <= n_sites; ++i) {
        h.add(spec.n_y * w * std::sin(2.0 * w * spec.n_x * t), {{i, PauliAxis::Y}});
        h.add(spec.n_y * w * std::cos(2.0 * w * spec.n_x * t), {{i, PauliAxis::Z}});
        h.add(-w * spec.n_x, {{i, PauliAxis::X}});
      }
      break;
  }
  return h.to_matrix();
}

Eigen::MatrixXcd drive_hamiltonian(const CouplingSet& c, const ControlFieldSpec& spec,
                                   int n_sites, double t) {
  if (!c.has_drive())
    throw std::invalid_argument("drive_hamiltonian: drive amplitudes missing");
  if (static_cast<int>(c.drive_b.size()) != n_sites)
    throw std::invalid_argument("drive_hamiltonian: drive amplitude list length mismatch");
  const double w = spec.omega();
  const double cy = std::cos(2.0 * w * spec.n_y * t);
  const double cx = std::cos(2.0 * w * spec.n_x * t);
  const double cz = std::cos(2.0 * w * spec.n_z * t);
  PauliSum h(n_sites);
  for (int j = 1; j <= n_sites; ++j) {
    const auto& b = c.drive_b[j - 1];
    if (b[0] != 0.0) h.add(b[0] * cy, {{j, PauliAxis::X}});
    if (b[1] != 0.0) h.add(b[1] * cx, {{j, PauliAxis::Y}});
    if (b[2] != 0.0) h.add(b[2] * cz, {{j, PauliAxis::Z}});
  }
  return h.to_matrix();
}

Eigen::MatrixXcd gate_hamiltonian(const ControlFieldSpec& spec, double t_g, int n_sites,
                                  double t) {
  if (spec.variant != ControlVariant::Gate)
    throw std::invalid_argument("gate_hamiltonian: spec variant must be Gate");
  if (t_g <= 0.0) throw std::invalid_argument("gate_hamiltonian: t_g must be positive");
  const double w = spec.omega();
  const double a = 2.0 * w * spec.n_x1 * t;
  const double b = 2.0 * w * spec.n_y1 * t;
  const double g = -0.5 * kPi / t_g;
  PauliSum pulse(n_sites);
  pulse.add(g * std::cos(b), {{1, PauliAxis::X}});
  pulse.add(g * std::sin(b) * std::cos(a), {{1, PauliAxis::Z}});
  pulse.add(g * std::sin(b) * std::sin(a), {{1, PauliAxis::Y}});
  return control_hamiltonian(spec, n_sites, t) + pulse.to_matrix();
}

namespace {

// exp(i theta sigma_axis) = cos(theta) I + i sin(theta) sigma_axis
Eigen::Matrix2cd axis_rotation(PauliAxis axis, double theta) {
  return std::cos(theta) * Eigen::Matrix2cd::Identity() +
         Complex(0.0, 1.0) * std::sin(theta) * pauli_matrix(axis);
}

}  // namespace

Eigen::Matrix2cd control_unitary_site(const ControlFieldSpec& spec, int site, double t,
                                      double pulse_t_g) {
  Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
  const double w = (spec.variant == ControlVariant::None) ? 0.0 : spec.omega();
  switch (spec.variant) {
    case ControlVariant::None:
      break;
    case ControlVariant::Standard:
    case ControlVariant::Gate:
      u = axis_rotation(PauliAxis::X, w * spec.nx_at(site) * t) *
          axis_rotation(PauliAxis::Y, w * spec.ny_at(site) * t);
      break;
    case ControlVariant::Rotated:
      u = axis_rotation(PauliAxis::X, w * spec.n_x * t) *
          axis_rotation(PauliAxis::Z, -w * spec.n_y * t);
      break;
  }
  if (pulse_t_g > 0.0 && site == 1)
    u = u * axis_rotation(PauliAxis::X, 0.5 * kPi * t / pulse_t_g);
  return u;
}

Eigen::MatrixXcd control_unitary(const ControlFieldSpec& spec, int n_sites, double t,
                                 double pulse_t_g) {
  Eigen::MatrixXcd u = control_unitary_site(spec, 1, t, pulse_t_g);
  for (int i = 2; i <= n_sites; ++i)
    u = kron(u, Eigen::MatrixXcd(control_unitary_site(spec, i, t, pulse_t_g)));
  return u;
}

GateIntegerCheck validate_gate_integers(int nx1, int ny1, int nx2, int ny2) {
  GateIntegerCheck r;
  auto require = [&r](bool ok, const std::string& what) {
    if (!ok) r.violated.push_back(what);
  };
  require(nx1 != ny1, "n_x(1) = n_y(1)");
  require(nx2 != ny2, "n_x(2) = n_y(2)");
  require(ny2 != ny1, "n_y(2) = n_y(1)");
  require(nx1 != nx2, "n_x(1) = n_x(2)");
  require(nx1 + nx2 != ny2, "n_x(1) + n_x(2) = n_y(2)");
  require(nx1 - nx2 != ny2, "n_x(1) - n_x(2) = n_y(2)");
  require(nx2 - nx1 != ny2, "n_x(2) - n_x(1) = n_y(2)");
  require(nx1 + nx2 != ny1, "n_x(1) + n_x(2) = n_y(1)");
  require(nx1 - nx2 != ny1, "n_x(1) - n_x(2) = n_y(1)");
  require(nx2 - nx1 != ny1, "n_x(2) - n_x(1) = n_y(1)");
  require(nx1 - nx2 + ny1 + ny2 != 0, "n_x(1) - n_x(2) + n_y(1) + n_y(2) = 0");
  require(nx1 - nx2 - ny1 - ny2 != 0, "n_x(1) - n_x(2) - n_y(1) - n_y(2) = 0");
  require(nx1 - nx2 + ny1 - ny2 != 0, "n_x(1) - n_x(2) + n_y(1) - n_y(2) = 0");
  require(nx1 - nx2 - ny1 + ny2 != 0, "n_x(1) - n_x(2) - n_y(1) + n_y(2) = 0");
  require(nx1 + nx2 - ny1 - ny2 != 0, "n_x(1) + n_x(2) - n_y(1) - n_y(2) = 0");
  require(nx1 + nx2 + ny1 - ny2 != 0, "n_x(1) + n_x(2) + n_y(1) - n_y(2) = 0");
  require(nx1 + nx2 - ny1 + ny2 != 0, "n_x(1) + n_x(2) - n_y(1) + n_y(2) = 0");
  r.ok = r.violated.empty();
  return r;
}

}  // namespace spinchain
