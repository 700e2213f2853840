#pragma once

// Dense-matrix oracles shared by the unit tests.

#include <Eigen/Dense>
#include <bit>
#include <random>

#include "qsense/pauli.hpp"
#include "qsense/statevector.hpp"

namespace qsense::oracle {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline CMat single_matrix(Pauli p) {
  CMat m(2, 2);
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

/// Matrix of a product; qubit q is bit q of the basis index.
inline CMat dense(const PauliProduct& p) {
  const std::size_t n = p.n_qubits();
  CMat m = CMat::Identity(1, 1);
  for (std::size_t q = n; q-- > 0;) {
    const CMat s = single_matrix(p.op(q));
    CMat next(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = m(r, c) * s;
    m = next;
  }
  return p.phase_factor() * m;
}

inline CMat dense(const PauliSum& s) {
  const auto dim = Eigen::Index{1} << s.n_qubits();
  CMat m = CMat::Zero(dim, dim);
  for (const auto& [k, c] : s) m += c * dense(PauliProduct(s.n_qubits(), k));
  return m;
}

inline CVec to_eigen(const StateVector& psi) {
  CVec v(static_cast<Eigen::Index>(psi.dim()));
  for (std::size_t k = 0; k < psi.dim(); ++k) v(static_cast<Eigen::Index>(k)) = psi[k];
  return v;
}

inline PauliProduct random_product(std::size_t n, std::mt19937_64& rng) {
  PauliProduct p(n);
  std::uniform_int_distribution<int> d(0, 3);
  for (std::size_t q = 0; q < n; ++q) p.set(q, static_cast<Pauli>(d(rng)));
  p.set_phase(d(rng));
  return p;
}

inline StateVector random_state(std::size_t n, std::mt19937_64& rng, bool real = false) {
  std::normal_distribution<double> g;
  std::vector<Complex> a(std::size_t{1} << n);
  for (auto& x : a) x = Complex(g(rng), real ? 0.0 : g(rng));
  StateVector s(n, std::move(a));
  s.normalize();
  return s;
}

}  // namespace qsense::oracle

namespace qsense::oracle {

/// Ladder operator built directly in the occupation-number basis, with the
/// sign (-1)^(number of occupied modes below j).
inline Eigen::MatrixXd ladder_dense(std::size_t n_modes, std::size_t j, bool creation) {
  const Eigen::Index dim = Eigen::Index{1} << n_modes;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const bool occ = (k >> j) & 1;
    if (occ == creation) continue;
    const int below = std::popcount(static_cast<std::uint64_t>(k) & ((std::uint64_t{1} << j) - 1));
    m(k ^ (Eigen::Index{1} << j), k) = (below & 1) ? -1.0 : 1.0;
  }
  return m;
}

}  // namespace qsense::oracle
