#include "spinchain/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinchain {

double transfer_fidelity(const Eigen::MatrixXcd& rho, const Eigen::VectorXcd& target) {
  if (rho.rows() != target.size() || rho.cols() != target.size())
    throw std::invalid_argument("transfer_fidelity: dimension mismatch");
  return std::real(Complex(target.adjoint() * rho * target));
}

double transfer_fidelity(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& target) {
  if (psi.size() != target.size())
    throw std::invalid_argument("transfer_fidelity: dimension mismatch");
  return std::norm(Complex(target.adjoint() * psi));
}

double concurrence(const Eigen::Matrix4cd& rho2) {
  if (hermiticity_error(rho2) > 1e-8)
    throw std::invalid_argument("concurrence: input not Hermitian");

  // Clip small negative eigenvalues (quadrature/roundoff) to zero; reject
  // anything genuinely indefinite.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (rho2 + rho2.adjoint()));
  if (es.eigenvalues().minCoeff() < -kConcurrenceNegativityLimit)
    throw std::invalid_argument("concurrence: input not positive semidefinite");
  Eigen::Vector4d clipped = es.eigenvalues().cwiseMax(0.0);
  Eigen::Matrix4cd rho =
      es.eigenvectors() * clipped.asDiagonal().toDenseMatrix().cast<Complex>() *
      es.eigenvectors().adjoint();

  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  // sigma_y x sigma_y in the (b_i b_j) basis: antidiagonal (-1, 1, 1, -1)
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Eigen::Matrix4cd rho_tilde = yy * rho.conjugate() * yy;

  // Eigenvalues of rho * rho_tilde are the squared Wootters lambdas; tiny
  // imaginary parts are discarded.
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> ces(rho * rho_tilde, false);
  std::array<double, 4> lam{};
  for (int i = 0; i < 4; ++i) {
    const Complex v = ces.eigenvalues()[i];
    lam[i] = std::sqrt(std::max(0.0, std::real(v)));
  }
  std::sort(lam.begin(), lam.end(), std::greater<double>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

double purity(const Eigen::MatrixXcd& rho) {
  return std::real((rho * rho).trace());
}

double rescaled_concurrence(double c, int n_sites) {
  if (n_sites < 2) throw std::invalid_argument("rescaled_concurrence: need N >= 2");
  return (n_sites - 1) * c;
}

}  // namespace spinchain
