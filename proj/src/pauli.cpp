#include "spinchain/pauli.hpp"

#include <stdexcept>

namespace spinchain {

void PauliSum::append(const PauliSum& other, Complex scale) {
  if (other.n_sites != n_sites)
    throw std::invalid_argument("PauliSum::append: site-count mismatch");
  for (const auto& t : other.terms)
    terms.push_back(PauliTerm{scale * t.coeff, t.factors});
}

namespace {

// Computes |m> and phase such that (Pauli string) |n> = phase |m>.
inline void string_action(const PauliTerm& term, int n_sites, std::size_t n,
                          std::size_t& m, Complex& phase) {
  m = n;
  phase = term.coeff;
  const Complex i1(0.0, 1.0);
  for (const auto& f : term.factors) {
    const std::size_t mask = std::size_t{1} << site_bit(f.site, n_sites);
    const bool b = (n & mask) != 0;
    switch (f.axis) {
      case PauliAxis::X:
        m ^= mask;
        break;
      case PauliAxis::Y:
        m ^= mask;
        phase *= b ? -i1 : i1;
        break;
      case PauliAxis::Z:
        phase *= b ? -1.0 : 1.0;
        break;
    }
  }
}

}  // namespace

Eigen::MatrixXcd PauliSum::to_matrix() const {
  const std::size_t dim = std::size_t{1} << n_sites;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& term : terms) {
    for (std::size_t n = 0; n < dim; ++n) {
      std::size_t m;
      Complex phase;
      string_action(term, n_sites, n, m, phase);
      out(m, n) += phase;
    }
  }
  return out;
}

void PauliSum::apply_add(const Eigen::VectorXcd& in, Eigen::VectorXcd& out, Complex scale) const {
  const std::size_t dim = std::size_t{1} << n_sites;
  if (in.size() != static_cast<Eigen::Index>(dim) || out.size() != in.size())
    throw std::invalid_argument("PauliSum::apply_add: dimension mismatch");
  for (const auto& term : terms) {
    for (std::size_t n = 0; n < dim; ++n) {
      std::size_t m;
      Complex phase;
      string_action(term, n_sites, n, m, phase);
      out[m] += scale * phase * in[n];
    }
  }
}

}  // namespace spinchain
