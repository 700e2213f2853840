#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qsense/pauli.hpp"
#include "qsense/statevector.hpp"

namespace qsense {

/// Orbital seniorities v_i in {0, 1}: 1 marks a singly occupied orbital.
/// Bit i of `bits` is v_i.
struct SeniorityConfig {
  std::size_t n_orb = 0;
  std::uint64_t bits = 0;

  SeniorityConfig() = default;
  SeniorityConfig(std::size_t n_orb, std::uint64_t bits);
  static SeniorityConfig from_vector(const std::vector<int>& v);

  bool unpaired(std::size_t i) const { return (bits >> i) & 1U; }
  /// Total seniority (number of unpaired electrons).
  std::size_t seniority() const;
  std::vector<int> to_vector() const;
  /// "0101" with orbital 0 first.
  std::string to_string() const;

  auto operator<=>(const SeniorityConfig&) const = default;
};

/// [Z0 Z1, Z2 Z3, ...]: one symmetry per spatial orbital on 2 n_orb qubits.
std::vector<PauliProduct> seniority_symmetries(std::size_t n_orb);

/// CNOT(2i+1 -> 2i) on every orbital, then the shuffle 2i -> i, 2i+1 -> n_orb+i.
/// Afterwards qubit i holds v_i and qubit n_orb+i holds the down-spin
/// occupation of orbital i.
CliffordMap build_clifford(std::size_t n_orb);

/// Operator acting on the tapered register between two seniority sectors.
struct EffectiveHamiltonian {
  PauliSum op;
  SeniorityConfig bra;
  SeniorityConfig ket;
};

/// Effective operator sum_k c_k s_k <bra|P_k^L|ket> P_k^R of the conjugated
/// operator uc hq uc^dagger.
EffectiveHamiltonian effective_hamiltonian(const PauliSum& hq, const SeniorityConfig& bra,
                                           const SeniorityConfig& ket, const CliffordMap& uc);

/// hq conjugated once by build_clifford(n_orb) and bucketed by the x-bits of
/// its seniority half, so effective operators for many sector pairs are cheap.
class TaperedHamiltonian {
 public:
  TaperedHamiltonian() = default;
  TaperedHamiltonian(const PauliSum& hq, std::size_t n_orb);

  std::size_t n_orb() const { return n_orb_; }
  std::size_t source_terms() const { return source_terms_; }
  double source_one_norm() const { return source_one_norm_; }
  const CliffordMap& clifford() const { return uc_; }

  EffectiveHamiltonian effective(const SeniorityConfig& bra, const SeniorityConfig& ket) const;

 private:
  struct Term {
    std::uint64_t z_left;
    PauliKey right;
    Complex coeff;  // c * i^phase * i^(#Y on the left half)
  };
  std::size_t n_orb_ = 0;
  std::size_t source_terms_ = 0;
  double source_one_norm_ = 0.0;
  CliffordMap uc_;
  std::map<std::uint64_t, std::vector<Term>> buckets_;
};

struct TaperedState {
  SeniorityConfig config;
  StateVector state;
};

/// Applies uc and splits the result as |v> (x) |phi>. Throws InputError
/// ("not a seniority eigenstate") when weight outside one sector exceeds 1e-10.
TaperedState taper_check(const StateVector& full_state, const CliffordMap& uc);

/// uc^dagger (|v> (x) |phi>) on 2 n_orb qubits.
StateVector untaper(const SeniorityConfig& config, const StateVector& tapered, const CliffordMap& uc);

}  // namespace qsense
