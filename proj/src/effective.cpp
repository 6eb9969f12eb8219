#include "spinchain/effective.hpp"

#include <cmath>
#include <stdexcept>

namespace spinchain {

namespace {

void add_bond(PauliSum& h, int j, double coeff, PauliAxis a, PauliAxis b) {
  if (coeff != 0.0) h.add(coeff, {{j, a}, {j + 1, b}});
}

}  // namespace

Eigen::MatrixXcd effective_chain(const CouplingSet& c, int n_sites, EffectiveVariant v) {
  if (c.n_sites() != n_sites)
    throw std::invalid_argument("effective_chain: coupling list does not match n_sites");
  if (v == EffectiveVariant::WithDrive1)
    return effective_chain(c, n_sites, EffectiveVariant::Hbar1) +
           effective_drive(c, n_sites, EffectiveVariant::WithDrive1);
  if (v == EffectiveVariant::WithDrive2)
    return effective_chain(c, n_sites, EffectiveVariant::Hbar2) +
           effective_drive(c, n_sites, EffectiveVariant::WithDrive2);

  PauliSum h(n_sites);
  for (int j = 1; j < n_sites; ++j) {
    const double l1 = c.bonds[j - 1][0];
    const double l2 = c.bonds[j - 1][1];
    const double l3 = c.bonds[j - 1][2];
    switch (v) {
      case EffectiveVariant::Hbar1: {
        const double s = l2 + l3;
        add_bond(h, j, 0.5 * l1 + 0.25 * s, PauliAxis::X, PauliAxis::X);
        add_bond(h, j, 0.5 * s, PauliAxis::Y, PauliAxis::Y);
        add_bond(h, j, 0.5 * l1 + 0.25 * s, PauliAxis::Z, PauliAxis::Z);
        break;
      }
      case EffectiveVariant::Hbar2: {
        const double s = l2 + l3;
        const double d = l2 - l3;
        add_bond(h, j, 0.5 * l1 + 0.25 * s, PauliAxis::X, PauliAxis::X);
        add_bond(h, j, 0.5 * s, PauliAxis::Y, PauliAxis::Y);
        add_bond(h, j, 0.5 * l1 + 0.25 * s, PauliAxis::Z, PauliAxis::Z);
        add_bond(h, j, 0.25 * d, PauliAxis::X, PauliAxis::Y);
        add_bond(h, j, 0.25 * d, PauliAxis::Y, PauliAxis::X);
        break;
      }
      case EffectiveVariant::RotatedIsing: {
        if (l2 != 0.0 || l3 != 0.0)
          throw std::invalid_argument(
              "effective_chain: RotatedIsing closed form requires an Ising coupling set");
        add_bond(h, j, 0.5 * l1, PauliAxis::X, PauliAxis::X);
        add_bond(h, j, 0.5 * l1, PauliAxis::Y, PauliAxis::Y);
        break;
      }
      default:
        break;
    }
  }
  return h.to_matrix();
}

Eigen::MatrixXcd effective_drive(const CouplingSet& c, int n_sites, EffectiveVariant v) {
  if (!c.has_drive())
    throw std::invalid_argument("effective_drive: drive amplitudes missing");
  if (static_cast<int>(c.drive_b.size()) != n_sites)
    throw std::invalid_argument("effective_drive: drive amplitude list length mismatch");
  const bool cross = (v == EffectiveVariant::Hbar2 || v == EffectiveVariant::WithDrive2);
  PauliSum h(n_sites);
  for (int j = 1; j <= n_sites; ++j) {
    const auto& b = c.drive_b[j - 1];
    double bx = 0.5 * b[0];
    if (cross) bx += 0.25 * b[1];  // extra sigma_x piece for n_y = 2 n_x
    if (bx != 0.0) h.add(bx, {{j, PauliAxis::X}});
    if (b[1] != 0.0) h.add(0.5 * b[1], {{j, PauliAxis::Y}});
    if (b[2] != 0.0) h.add(0.25 * b[2], {{j, PauliAxis::Z}});
  }
  return h.to_matrix();
}

namespace {

Eigen::MatrixXcd midpoint_average(const std::function<Eigen::MatrixXcd(double)>& H_of_t,
                                  const ControlFieldSpec& spec, int n_sites, int nodes) {
  const double t_c = spec.t_c;
  const std::size_t dim = std::size_t{1} << n_sites;
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < nodes; ++k) {
    const double t = (k + 0.5) * t_c / nodes;
    const Eigen::MatrixXcd u = control_unitary(spec, n_sites, t);
    acc += u.adjoint() * H_of_t(t) * u;
  }
  return acc / double(nodes);
}

}  // namespace

Eigen::MatrixXcd numerical_time_average(
    const std::function<Eigen::MatrixXcd(double)>& H_of_t, const ControlFieldSpec& spec,
    int n_sites, int nodes) {
  if (!spec.is_integer_spec())
    throw std::invalid_argument("numerical_time_average: non-periodic (non-integer) spec");
  if (nodes < 2) throw std::invalid_argument("numerical_time_average: too few nodes");
  const Eigen::MatrixXcd coarse = midpoint_average(H_of_t, spec, n_sites, nodes);
  const Eigen::MatrixXcd fine = midpoint_average(H_of_t, spec, n_sites, 2 * nodes);
  const double scale = std::max(1.0, fine.cwiseAbs().maxCoeff());
  if ((coarse - fine).cwiseAbs().maxCoeff() / scale > 1e-9)
    throw std::runtime_error("numerical_time_average: quadrature did not converge");
  return fine;
}

Eigen::MatrixXcd numerical_time_average(const Eigen::MatrixXcd& H,
                                        const ControlFieldSpec& spec, int n_sites,
                                        int nodes) {
  return numerical_time_average([&H](double) { return H; }, spec, n_sites, nodes);
}

double decoupling_residual(const ControlFieldSpec& spec, int n_sites, int nodes) {
  std::array<double, 3> unit{1.0, 1.0, 1.0};
  const Eigen::MatrixXcd hsb = bath_hamiltonian(unit, n_sites);
  const Eigen::MatrixXcd avg =
      midpoint_average([&hsb](double) { return hsb; }, spec, n_sites, nodes);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (avg + avg.adjoint()),
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

// 8-point Gauss-Legendre abscissae/weights on [-1, 1].
constexpr int kGlPoints = 8;
constexpr double kGlX[kGlPoints] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr double kGlW[kGlPoints] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

// Composite Gauss-Legendre integral of a matrix-valued function on [a, b].
Eigen::MatrixXcd gl_integral(const std::function<Eigen::MatrixXcd(double)>& f, double a,
                             double b, int panels, Eigen::Index dim) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
  const double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * w;
    for (int q = 0; q < kGlPoints; ++q) {
      const double t = lo + 0.5 * w * (1.0 + kGlX[q]);
      acc += (0.5 * w * kGlW[q]) * f(t);
    }
  }
  return acc;
}

}  // namespace

Eigen::MatrixXcd magnus_ordered_commutator_integral(
    const std::function<Eigen::MatrixXcd(double)>& A,
    const std::function<Eigen::MatrixXcd(double)>& B, double t_c, int panels) {
  const Eigen::MatrixXcd probe = A(0.0);
  const Eigen::Index dim = probe.rows();
  auto outer = [&](double t1) -> Eigen::MatrixXcd {
    const int inner_panels = std::max(1, static_cast<int>(std::ceil(t1 / t_c * panels)));
    const Eigen::MatrixXcd g = gl_integral(B, 0.0, t1, inner_panels, dim);
    const Eigen::MatrixXcd a = A(t1);
    return a * g - g * a;
  };
  const Eigen::MatrixXcd integral = gl_integral(outer, 0.0, t_c, panels, dim);
  return Complex(0.0, -0.5 / t_c) * integral;
}

Eigen::MatrixXcd magnus_second_order(const Eigen::MatrixXcd& H, const ControlFieldSpec& spec,
                                     int n_sites, int panels) {
  if (!spec.is_integer_spec())
    throw std::invalid_argument("magnus_second_order: non-periodic (non-integer) spec");
  auto conj = [&](double t) -> Eigen::MatrixXcd {
    const Eigen::MatrixXcd u = control_unitary(spec, n_sites, t);
    return u.adjoint() * H * u;
  };
  return magnus_ordered_commutator_integral(conj, conj, spec.t_c, panels);
}

Eigen::MatrixXcd rotation_to_xx(int n_sites) {
  // exp(-i pi sx / 4) per site
  Eigen::Matrix2cd r = std::cos(M_PI / 4.0) * Eigen::Matrix2cd::Identity() -
                       Complex(0.0, 1.0) * std::sin(M_PI / 4.0) * pauli_matrix(PauliAxis::X);
  Eigen::MatrixXcd u = r;
  for (int i = 2; i <= n_sites; ++i) u = kron(u, Eigen::MatrixXcd(r));
  return u;
}

}  // namespace spinchain
