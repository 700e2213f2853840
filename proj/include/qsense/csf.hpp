#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qsense/statevector.hpp"
#include "qsense/taper.hpp"

namespace qsense {

enum class CsfKind { HF, SingleSinglet, DoubleSinglet, TripletPair };

std::string to_string(CsfKind kind);
CsfKind csf_kind_from_string(const std::string& s);

/// Moves the electron pair of `source` into the empty orbital `target`.
struct PairMove {
  std::size_t target = 0;
  std::size_t source = 0;
  auto operator<=>(const PairMove&) const = default;
};

/// A singlet configuration state function built from spin-adapted
/// excitations i->a (and j->b) on a closed-shell reference. The reference is
/// the Hartree-Fock determinant with `pair_moves` applied first. A
/// DoubleSinglet may repeat its hole (i == j) or its particle (a == b), which
/// leaves two unpaired electrons.
struct CsfSpec {
  CsfKind kind = CsfKind::HF;
  std::size_t i = 0, j = 0, a = 0, b = 0;
  std::vector<PairMove> pair_moves;

  static CsfSpec hf();
  static CsfSpec single(std::size_t i, std::size_t a);
  static CsfSpec double_singlet(std::size_t i, std::size_t j, std::size_t a, std::size_t b);
  static CsfSpec triplet_pair(std::size_t i, std::size_t j, std::size_t a, std::size_t b);

  /// Singly occupied orbitals, ascending.
  std::vector<std::size_t> unpaired() const;
  /// Doubly occupied orbitals of the reference after the pair moves.
  std::vector<std::size_t> reference_pairs(std::size_t n_occ) const;
  /// Doubly occupied orbitals of the CSF itself.
  std::vector<std::size_t> paired(std::size_t n_occ) const;
  /// e.g. "D(2,3->5,6)" or "S(4->5)[5<-3]"
  std::string to_string() const;

  auto operator<=>(const CsfSpec&) const = default;
};

/// exp(theta (s+_target s-_source - s+_source s-_target)) on the tapered register.
struct PairRotation {
  std::size_t target = 0;
  std::size_t source = 0;
  double theta = 0.0;
};

/// One basis function: a CSF followed by pair rotations, applied in list order
/// (rotations[0] acts on the CSF first).
struct BasisState {
  CsfSpec csf;
  std::vector<PairRotation> rotations;
  std::string label;
};

/// Throws InputError on index collisions, out-of-range orbitals or rotations
/// touching an unpaired orbital.
void validate(const CsfSpec& spec, std::size_t n_orb, std::size_t n_elec);
void validate(const BasisState& state, std::size_t n_orb, std::size_t n_elec);

/// Normalized expansion over determinants on 2 n_orb spin-orbital bits
/// (interleaved up/down), Jordan-Wigner sign convention.
using DeterminantExpansion = std::map<std::uint64_t, double>;
DeterminantExpansion csf_determinants(const CsfSpec& spec, std::size_t n_orb, std::size_t n_elec);

StateVector make_csf_full(const CsfSpec& spec, std::size_t n_orb, std::size_t n_elec);
StateVector make_csf_tapered(const CsfSpec& spec, std::size_t n_orb, std::size_t n_elec);

SeniorityConfig seniority_config(const CsfSpec& spec, std::size_t n_orb);
SeniorityConfig seniority_config(const BasisState& state, std::size_t n_orb);

void apply_pair_rotation(StateVector& psi, std::size_t target, std::size_t source, double theta);
StateVector apply_pair_rotation(const StateVector& psi, std::size_t target, std::size_t source,
                                double theta);

/// Tapered |phi_mu^(c)> on n_orb qubits.
StateVector prepare_tapered(const BasisState& state, std::size_t n_orb, std::size_t n_elec);

/// Text records, one "state ..." line per basis function.
void write_basis(std::ostream& out, const std::vector<BasisState>& basis, std::size_t n_orb,
                 std::size_t n_elec);
struct BasisFile {
  std::size_t n_orb = 0;
  std::size_t n_elec = 0;
  std::vector<BasisState> states;
};
BasisFile parse_basis(std::istream& in);

}  // namespace qsense
