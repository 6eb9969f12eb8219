#include "spinchain/freefermion.hpp"

#include <cmath>
#include <stdexcept>

namespace spinchain {

QuadraticForm build_quadratic_form(double lambda1, double lambda2, int n_sites,
                                   EffectiveVariant variant) {
  if (lambda1 == 0.0) throw std::invalid_argument("build_quadratic_form: lambda1 = 0");
  if (n_sites < 2) throw std::invalid_argument("build_quadratic_form: need N >= 2");
  if (variant != EffectiveVariant::Hbar1 && variant != EffectiveVariant::Hbar2)
    throw std::invalid_argument("build_quadratic_form: variant must be Hbar1 or Hbar2");

  QuadraticForm q;
  q.n_sites = n_sites;
  q.lambda1 = lambda1;
  q.variant = variant;
  if (variant == EffectiveVariant::Hbar1) {
    q.gamma = 1.0;
    q.phi = 0.0;
  } else {
    const double s = lambda1 + lambda2;
    q.gamma = std::sqrt(lambda1 * lambda1 + s * s) / lambda1;
    // atan2 keeps lambda1 gamma e^{-i phi} = lambda1 - i(lambda1 + lambda2)
    // exact for either sign of lambda1 (atan for lambda1 > 0).
    q.phi = std::atan2(s, lambda1);
  }
  q.J = Eigen::MatrixXd::Zero(n_sites, n_sites);
  q.K = Eigen::MatrixXd::Zero(n_sites, n_sites);
  for (int i = 0; i + 1 < n_sites; ++i) {
    q.J(i, i + 1) = -1.0;
    q.J(i + 1, i) = -1.0;
    q.K(i, i + 1) = q.gamma;
    q.K(i + 1, i) = -q.gamma;
  }
  return q;
}

double FreeFermionSolution::canonical_error() const {
  const Eigen::MatrixXcd gc = g.cast<Complex>();
  const double e1 = (gc * gc.adjoint() + h * h.adjoint() -
                     Eigen::MatrixXcd::Identity(n_sites, n_sites))
                        .cwiseAbs()
                        .maxCoeff();
  const double e2 = (gc * h.transpose() + h * gc.transpose()).cwiseAbs().maxCoeff();
  return std::max(e1, e2);
}

namespace {

// Deterministic sign: first significant component made positive.
bool flip_for_sign(const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > 1e-8) return v[i] < 0.0;
  return false;
}

}  // namespace

FreeFermionSolution solve_free_fermion(const QuadraticForm& q) {
  const int n = q.n_sites;
  // The row eigenproblem Phi_k (J-K)(J+K) = (Lambda_k/lambda1)^2 Phi_k with
  // Phi_k (J-K) = (Lambda_k/lambda1) Psi_k is exactly the SVD of
  // J-K = Phi^T diag(Lambda/lambda1) Psi: (J+K) = (J-K)^T makes
  // (J-K)(J+K) = (J-K)(J-K)^T symmetric PSD, singular vectors are the
  // Phi/Psi rows, and singular values the nonnegative Lambda_k/lambda1.
  // Zero modes come out as the null-space singular pairs, and near-zero
  // edge modes avoid the unstable division by sqrt(mu_k).
  const Eigen::MatrixXd JmK = q.J - q.K;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(JmK, Eigen::ComputeFullU | Eigen::ComputeFullV);

  FreeFermionSolution sol;
  sol.n_sites = n;
  sol.lambda1 = q.lambda1;
  sol.phi = q.phi;
  sol.Lambda.resize(n);
  sol.Phi.resize(n, n);
  sol.Psi.resize(n, n);

  const double sigma_scale = std::max(1.0, svd.singularValues().maxCoeff());
  const double zero_tol = 1e-12 * sigma_scale;

  // Ascending order, exact zeros for the null modes, sign fixed on Phi with
  // the paired Psi row flipped along.
  for (int k = 0; k < n; ++k) {
    const int src = n - 1 - k;  // JacobiSVD sorts descending
    const double sigma = svd.singularValues()[src];
    sol.Lambda[k] = (sigma <= zero_tol) ? 0.0 : q.lambda1 * sigma;
    Eigen::VectorXd phi_k = svd.matrixU().col(src);
    Eigen::VectorXd psi_k = svd.matrixV().col(src);
    if (flip_for_sign(phi_k)) {
      phi_k = -phi_k;
      psi_k = -psi_k;
    }
    sol.Phi.row(k) = phi_k.transpose();
    sol.Psi.row(k) = psi_k.transpose();
  }

  // g = (Phi + Psi)/2,  h = e^{-i phi} (Phi - Psi)/2; the inverse
  // transformation of a canonical pair is g' = g^dag, h' = h^T.
  sol.g = 0.5 * (sol.Phi + sol.Psi);
  const Complex ephi = std::exp(Complex(0.0, -q.phi));
  sol.h = ephi * (0.5 * (sol.Phi - sol.Psi)).cast<Complex>();
  sol.g_inv = sol.g.transpose().cast<Complex>();
  sol.h_inv = sol.h.transpose();
  return sol;
}

Complex pfaffian(Eigen::MatrixXcd M) {
  const Eigen::Index n = M.rows();
  if (n != M.cols() || (n % 2) != 0)
    throw std::invalid_argument("pfaffian: need an even-dimensional square matrix");
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M + M.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("pfaffian: matrix is not antisymmetric");
  if (n == 0) return Complex(1.0, 0.0);

  // Skew-symmetric tridiagonalization by Gaussian elimination with partial
  // pivoting; the Pfaffian is the product of the resulting (k, k+1) entries
  // with the permutation sign.
  Complex result(1.0, 0.0);
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index pivot = k + 1;
    for (Eigen::Index i = k + 2; i < n; ++i)
      if (std::abs(M(i, k)) > std::abs(M(pivot, k))) pivot = i;
    if (pivot != k + 1) {
      M.row(k + 1).swap(M.row(pivot));
      M.col(k + 1).swap(M.col(pivot));
      result = -result;
    }
    const Complex element = M(k, k + 1);
    if (element == Complex(0.0, 0.0)) return Complex(0.0, 0.0);
    result *= element;
    if (k + 2 >= n) break;
    const Eigen::Index rest = n - (k + 2);
    // Eliminate row/column k (and k+1) against the pivot pair, updating the
    // trailing block: M_ij += tau_i M_{j,k+1} - tau_j M_{i,k+1}.
    Eigen::VectorXcd tau = M.block(k, k + 2, 1, rest).transpose() / element;
    Eigen::VectorXcd col = M.block(k + 2, k + 1, rest, 1);
    M.block(k + 2, k + 2, rest, rest).noalias() += tau * col.transpose();
    M.block(k + 2, k + 2, rest, rest).noalias() -= col * tau.transpose();
  }
  return result;
}

Complex pfaffian_expansion(const Eigen::MatrixXcd& M) {
  const Eigen::Index n = M.rows();
  if (n != M.cols() || (n % 2) != 0)
    throw std::invalid_argument("pfaffian_expansion: need even dimension");
  if (n > 8) throw std::invalid_argument("pfaffian_expansion: dimension > 8");
  if (n == 0) return Complex(1.0, 0.0);
  if (n == 2) return M(0, 1);
  // Expand along the first row: Pf(M) = sum_j (-1)^j M_{0,j} Pf(M without 0, j).
  Complex acc(0.0, 0.0);
  double sign = 1.0;
  for (Eigen::Index j = 1; j < n; ++j) {
    Eigen::MatrixXcd sub(n - 2, n - 2);
    Eigen::Index r = 0;
    for (Eigen::Index a = 1; a < n; ++a) {
      if (a == j) continue;
      Eigen::Index c = 0;
      for (Eigen::Index b = 1; b < n; ++b) {
        if (b == j) continue;
        sub(r, c++) = M(a, b);
      }
      ++r;
    }
    acc += sign * M(0, j) * pfaffian_expansion(sub);
    sign = -sign;
  }
  return acc;
}

namespace {

enum class MajoranaKind { P, Q };  // P = c^dag + c, Q = c^dag - c

struct MajoranaOp {
  MajoranaKind kind;
  int site;  // 1-based
};

Complex contraction(const CorrelatorSet& cs, const MajoranaOp& a, const MajoranaOp& b) {
  const int i = a.site - 1, j = b.site - 1;
  if (a.kind == MajoranaKind::Q && b.kind == MajoranaKind::P) return cs.F(i, j);
  if (a.kind == MajoranaKind::Q && b.kind == MajoranaKind::Q) return cs.S(i, j);
  if (a.kind == MajoranaKind::P && b.kind == MajoranaKind::P) return cs.T(i, j);
  return cs.W(i, j);  // P Q
}

Complex wick_pfaffian(const CorrelatorSet& cs, const std::vector<MajoranaOp>& ops) {
  const Eigen::Index n = static_cast<Eigen::Index>(ops.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a + 1; b < n; ++b) {
      m(a, b) = contraction(cs, ops[a], ops[b]);
      m(b, a) = -m(a, b);  // completed antisymmetrically from the upper triangle
    }
  return pfaffian(std::move(m));
}

}  // namespace

CorrelatorSet correlators_at(const FreeFermionSolution& sol, double t,
                             const std::vector<std::pair<int, int>>& pairs) {
  const int n = sol.n_sites;
  CorrelatorSet cs;
  cs.t = t;
  cs.n_sites = n;

  // g'(t) = g' e^{-i t H}, h'(t) = h' e^{+i t H}, H = diag(Lambda).
  Eigen::VectorXcd eminus(n), eplus(n);
  for (int k = 0; k < n; ++k) {
    eminus[k] = std::exp(Complex(0.0, -sol.Lambda[k] * t));
    eplus[k] = std::conj(eminus[k]);
  }
  const Eigen::MatrixXcd gpt = sol.g_inv * eminus.asDiagonal();
  const Eigen::MatrixXcd hpt = sol.h_inv * eplus.asDiagonal();

  cs.A = gpt * sol.g.cast<Complex>() + hpt * sol.h.conjugate();
  cs.B = gpt * sol.h + hpt * sol.g.cast<Complex>().conjugate();
  cs.X = cs.A + cs.B.conjugate();
  cs.Y = cs.B.conjugate() - cs.A;
  cs.F = cs.Y * cs.X.adjoint();
  cs.S = -cs.Y * cs.Y.adjoint();
  cs.T = cs.X * cs.X.adjoint();
  cs.W = -cs.X * cs.Y.adjoint();

  cs.pairs.reserve(pairs.size());
  for (auto [l, m] : pairs) {
    if (l < 1 || m < 1 || l > n || m > n || l == m)
      throw std::invalid_argument("correlators_at: pair indices out of range");
    if (l > m) std::swap(l, m);
    PairCorrelators pc;
    pc.l = l;
    pc.m = m;
    pc.z_l = -std::real(cs.W(l - 1, l - 1));
    pc.z_m = -std::real(cs.W(m - 1, m - 1));

    // Operator strings behind each correlator (Wick contraction order):
    //   xx:  Q_l P_{l+1} Q_{l+1} ... P_{m-1} Q_{m-1} P_m
    //   yy:  P_l Q_{l+1} P_{l+1} ... Q_{m-1} P_{m-1} Q_m   x (-1)^{m-l}
    //   xy:  Q_l P_{l+1} Q_{l+1} ... P_{m-1} Q_{m-1} Q_m   x (-i)
    //   yx:  P_l P_{l+1} Q_{l+1} ... P_{m-1} Q_{m-1} P_m   x (-i)
    //   zz:  P_l Q_l P_m Q_m
    std::vector<MajoranaOp> ops;
    auto middle_pq = [&](std::vector<MajoranaOp>& v) {
      for (int j = l + 1; j <= m - 1; ++j) {
        v.push_back({MajoranaKind::P, j});
        v.push_back({MajoranaKind::Q, j});
      }
    };
    auto middle_qp = [&](std::vector<MajoranaOp>& v) {
      for (int j = l + 1; j <= m - 1; ++j) {
        v.push_back({MajoranaKind::Q, j});
        v.push_back({MajoranaKind::P, j});
      }
    };

    ops = {{MajoranaKind::Q, l}};
    middle_pq(ops);
    ops.push_back({MajoranaKind::P, m});
    pc.xx = wick_pfaffian(cs, ops);

    ops = {{MajoranaKind::P, l}};
    middle_qp(ops);
    ops.push_back({MajoranaKind::Q, m});
    const double sign_yy = ((m - l) % 2 == 0) ? 1.0 : -1.0;
    pc.yy = sign_yy * wick_pfaffian(cs, ops);

    ops = {{MajoranaKind::Q, l}};
    middle_pq(ops);
    ops.push_back({MajoranaKind::Q, m});
    pc.xy = Complex(0.0, -1.0) * wick_pfaffian(cs, ops);

    ops = {{MajoranaKind::P, l}};
    middle_pq(ops);
    ops.push_back({MajoranaKind::P, m});
    pc.yx = Complex(0.0, -1.0) * wick_pfaffian(cs, ops);

    ops = {{MajoranaKind::P, l},
           {MajoranaKind::Q, l},
           {MajoranaKind::P, m},
           {MajoranaKind::Q, m}};
    pc.zz = wick_pfaffian(cs, ops);

    cs.pairs.push_back(pc);
  }
  return cs;
}

TwoSpinDensity two_spin_density_jw(const CorrelatorSet& cs, std::pair<int, int> pair) {
  int l = pair.first, m = pair.second;
  if (l > m) std::swap(l, m);
  const PairCorrelators* pc = nullptr;
  for (const auto& p : cs.pairs)
    if (p.l == l && p.m == m) pc = &p;
  if (!pc) throw std::invalid_argument("two_spin_density_jw: correlators missing for pair");

  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd sx = pauli_matrix(PauliAxis::X);
  const Eigen::Matrix2cd sy = pauli_matrix(PauliAxis::Y);
  const Eigen::Matrix2cd sz = pauli_matrix(PauliAxis::Z);
  auto k22 = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    return Eigen::Matrix4cd(kron(Eigen::MatrixXcd(a), Eigen::MatrixXcd(b)));
  };

  // Only {xx, yy, xy, yx, zz, z 1, 1 z} survive; everything else vanishes for
  // this initial state.
  Eigen::Matrix4cd rho = k22(id, id).cast<Complex>();
  rho += pc->z_l * k22(sz, id);
  rho += pc->z_m * k22(id, sz);
  rho += pc->xx * k22(sx, sx);
  rho += pc->yy * k22(sy, sy);
  rho += pc->xy * k22(sx, sy);
  rho += pc->yx * k22(sy, sx);
  rho += pc->zz * k22(sz, sz);
  rho *= 0.25;
  rho = 0.5 * (rho + rho.adjoint()).eval();  // discard numerical skew

  TwoSpinDensity out;
  out.site_i = l;
  out.site_j = m;
  out.rho = rho;
  return out;
}

std::vector<Eigen::Matrix4cd> jw_pair_density_curve(double lambda1, double lambda2,
                                                    int n_sites, EffectiveVariant variant,
                                                    std::pair<int, int> pair,
                                                    const Eigen::VectorXd& times) {
  const QuadraticForm q = build_quadratic_form(lambda1, lambda2, n_sites, variant);
  const FreeFermionSolution sol = solve_free_fermion(q);
  std::vector<Eigen::Matrix4cd> out;
  out.reserve(times.size());
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    const CorrelatorSet cs = correlators_at(sol, times[i], {pair});
    out.push_back(two_spin_density_jw(cs, pair).rho);
  }
  return out;
}

ObservableSeries jw_concurrence_curve(double lambda1, double lambda2, int n_sites,
                                      EffectiveVariant variant, std::pair<int, int> pair,
                                      const Eigen::VectorXd& times) {
  const auto rhos = jw_pair_density_curve(lambda1, lambda2, n_sites, variant, pair, times);
  ObservableSeries s;
  s.times = times;
  s.values.resize(times.size());
  s.label = "concurrence";
  for (Eigen::Index i = 0; i < times.size(); ++i) s.values[i] = concurrence(rhos[i]);
  return s;
}

}  // namespace spinchain
