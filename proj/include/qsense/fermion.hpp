#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qsense/pauli.hpp"

namespace qsense {

/// Closed-shell electronic structure data in an orthonormal spatial-orbital
/// basis. Two-electron integrals are kept in chemist notation (pq|rs).
struct FermionIntegrals {
  std::size_t n_orb = 0;
  std::size_t n_elec = 0;
  double e_core = 0.0;
  Eigen::MatrixXd h;
  std::vector<double> g;  // n_orb^4, row-major in (p, q, r, s)

  FermionIntegrals() = default;
  FermionIntegrals(std::size_t n_orb, std::size_t n_elec);

  std::size_t n_occ() const { return n_elec / 2; }
  std::size_t n_qubits() const { return 2 * n_orb; }

  double& eri(std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    return g[((p * n_orb + q) * n_orb + r) * n_orb + s];
  }
  double eri(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return g[((p * n_orb + q) * n_orb + r) * n_orb + s];
  }

  /// Throws InputError when h or g break their permutational symmetry by
  /// more than tol, or the electron count is odd.
  void validate(double tol = 1e-10) const;
};

/// Molpro-style FCIDUMP: &FCI NORB=, NELEC=, MS2= header, then "value p q r s"
/// records with 1-based indices and 0 marking an absent index.
FermionIntegrals parse_fcidump(std::istream& in);
FermionIntegrals read_fcidump(const std::string& path);
/// Writes every symmetry-unique integral above `tol`.
void write_fcidump(std::ostream& out, const FermionIntegrals& ints, double tol = 1e-14);

/// Spin-orbital qubit of spatial orbital `orb`: up is 2*orb, down 2*orb+1.
constexpr std::size_t spin_orbital(std::size_t orb, bool down) { return 2 * orb + (down ? 1 : 0); }

/// A ladder operator a_j (creation = false) or a_j^dagger (creation = true).
struct Ladder {
  std::size_t mode;
  bool creation;
};

/// Jordan-Wigner image of an ordered product of ladder operators.
PauliSum jw_product(std::size_t n_qubits, const std::vector<Ladder>& ops);

/// H = e_core + sum h_pq a+_{p s} a_{q s}
///       + 1/2 sum (pq|rs) a+_{p s} a+_{r t} a_{s t} a_{q s}
/// on 2 n_orb qubits in the interleaved spin-orbital layout.
PauliSum jordan_wigner(const FermionIntegrals& ints);

PauliSum number_operator(std::size_t n_orb);
PauliSum sz_operator(std::size_t n_orb);
PauliSum s2_operator(std::size_t n_orb);

/// Real antisymmetric generator of an orbital rotation U = exp(t).
class OrbitalRotation {
 public:
  explicit OrbitalRotation(std::size_t n_orb);
  /// Throws InputError unless t is square and exactly antisymmetric.
  explicit OrbitalRotation(Eigen::MatrixXd t);

  std::size_t n_orb() const { return static_cast<std::size_t>(t_.rows()); }
  const Eigen::MatrixXd& generator() const { return t_; }
  /// Sets t_pq = value and t_qp = -value.
  void set(std::size_t p, std::size_t q, double value);
  double get(std::size_t p, std::size_t q) const { return t_(p, q); }
  Eigen::MatrixXd unitary() const;

 private:
  Eigen::MatrixXd t_;
};

/// Integrals in the rotated basis: h' = U^T h U, g' the matching four-index
/// transform, e_core unchanged.
FermionIntegrals rotate_orbitals(const FermionIntegrals& ints, const OrbitalRotation& rot);
FermionIntegrals rotate_orbitals(const FermionIntegrals& ints, const Eigen::MatrixXd& u);

/// Closed-shell determinant energy with the lowest n_occ orbitals doubly occupied.
double hf_energy(const FermionIntegrals& ints);

/// eps_p = h_pp + sum_i (2 (pp|ii) - (pi|ip)) over the doubly occupied orbitals.
std::vector<double> orbital_energies(const FermionIntegrals& ints);

/// Paired-double MP2 amplitude t_ia = (ai|ai) / (2 (eps_i - eps_a)).
/// Returns nullopt when |eps_a - eps_i| < 1e-8.
std::optional<double> mp2_pair_amplitude(const FermionIntegrals& ints, std::size_t i,
                                         std::size_t a);

}  // namespace qsense
