#include "spinchain/hilbert.hpp"

#include <stdexcept>

namespace spinchain {

Eigen::Matrix2cd pauli_matrix(PauliAxis axis) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  const Complex i1(0.0, 1.0);
  switch (axis) {
    case PauliAxis::X:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case PauliAxis::Y:
      m(0, 1) = -i1;
      m(1, 0) = i1;
      break;
    case PauliAxis::Z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
  }
  return m;
}

SpinState basis_state(const std::vector<int>& bits) {
  if (bits.empty()) throw std::invalid_argument("basis_state: empty bit list");
  const int n = static_cast<int>(bits.size());
  std::size_t index = 0;
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("basis_state: bits must be 0 or 1");
    index = (index << 1) | static_cast<std::size_t>(b);
  }
  SpinState s;
  s.n_sites = n;
  s.amplitudes = Eigen::VectorXcd::Zero(std::size_t{1} << n);
  s.amplitudes[static_cast<Eigen::Index>(index)] = 1.0;
  return s;
}

Eigen::MatrixXcd embed_pauli(PauliAxis axis, int site, int n_sites) {
  if (site < 1 || site > n_sites)
    throw std::invalid_argument("embed_pauli: site out of range");
  const std::size_t dim = std::size_t{1} << n_sites;
  const std::size_t mask = std::size_t{1} << site_bit(site, n_sites);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  const Complex i1(0.0, 1.0);
  for (std::size_t n = 0; n < dim; ++n) {
    const bool b = (n & mask) != 0;
    switch (axis) {
      case PauliAxis::X:
        m(n ^ mask, n) = 1.0;
        break;
      case PauliAxis::Y:
        m(n ^ mask, n) = b ? -i1 : i1;
        break;
      case PauliAxis::Z:
        m(n, n) = b ? -1.0 : 1.0;
        break;
    }
  }
  return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {

void check_pair(int i, int j, int n_sites) {
  if (i == j || i < 1 || j < 1 || i > n_sites || j > n_sites)
    throw std::invalid_argument("partial_trace_pair: invalid site pair");
}

}  // namespace

TwoSpinDensity partial_trace_pair(const Eigen::MatrixXcd& rho, int i, int j, int n_sites) {
  check_pair(i, j, n_sites);
  const std::size_t dim = std::size_t{1} << n_sites;
  if (rho.rows() != static_cast<Eigen::Index>(dim) || rho.cols() != rho.rows())
    throw std::invalid_argument("partial_trace_pair: dimension mismatch");
  const std::size_t mi = std::size_t{1} << site_bit(i, n_sites);
  const std::size_t mj = std::size_t{1} << site_bit(j, n_sites);

  TwoSpinDensity out;
  out.site_i = i;
  out.site_j = j;
  out.rho.setZero();
  // Iterate over the "rest" configurations once, addressing the four pair
  // configurations on top of each.
  const std::size_t rest_mask = (dim - 1) & ~(mi | mj);
  for (std::size_t rest = 0;; rest = ((rest | mi | mj) + 1) & rest_mask) {
    for (int a = 0; a < 4; ++a) {
      const std::size_t ra = rest | ((a & 2) ? mi : 0) | ((a & 1) ? mj : 0);
      for (int b = 0; b < 4; ++b) {
        const std::size_t rb = rest | ((b & 2) ? mi : 0) | ((b & 1) ? mj : 0);
        out.rho(a, b) += rho(ra, rb);
      }
    }
    if (rest == rest_mask) break;
  }
  return out;
}

TwoSpinDensity partial_trace_pair(const Eigen::VectorXcd& psi, int i, int j, int n_sites) {
  check_pair(i, j, n_sites);
  const std::size_t dim = std::size_t{1} << n_sites;
  if (psi.size() != static_cast<Eigen::Index>(dim))
    throw std::invalid_argument("partial_trace_pair: dimension mismatch");
  const std::size_t mi = std::size_t{1} << site_bit(i, n_sites);
  const std::size_t mj = std::size_t{1} << site_bit(j, n_sites);

  TwoSpinDensity out;
  out.site_i = i;
  out.site_j = j;
  out.rho.setZero();
  const std::size_t rest_mask = (dim - 1) & ~(mi | mj);
  Eigen::Vector4cd amp;
  for (std::size_t rest = 0;; rest = ((rest | mi | mj) + 1) & rest_mask) {
    for (int a = 0; a < 4; ++a)
      amp(a) = psi(rest | ((a & 2) ? mi : 0) | ((a & 1) ? mj : 0));
    out.rho += amp * amp.adjoint();
    if (rest == rest_mask) break;
  }
  return out;
}

double hermiticity_error(const Eigen::MatrixXcd& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_normalized(const Eigen::VectorXcd& psi, double tol) {
  return std::abs(psi.squaredNorm() - 1.0) <= tol;
}

void check_sites(int n_sites, int max_sites) {
  if (n_sites < 1) throw std::invalid_argument("n_sites must be positive");
  if (n_sites > max_sites)
    throw std::invalid_argument("n_sites exceeds the dense-path cap (" +
                                std::to_string(max_sites) + ")");
}

}  // namespace spinchain
