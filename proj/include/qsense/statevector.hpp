#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "qsense/pauli.hpp"

namespace qsense {

/// Dense state on n qubits; basis index bit q is the value of qubit q.
class StateVector {
 public:
  StateVector() = default;
  /// |0...0> on n qubits.
  explicit StateVector(std::size_t n_qubits);
  StateVector(std::size_t n_qubits, std::vector<Complex> amplitudes);
  static StateVector basis_state(std::size_t n_qubits, std::uint64_t index);

  std::size_t n_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const Complex> amplitudes() const { return amps_; }
  std::span<Complex> amplitudes() { return amps_; }
  const Complex& operator[](std::size_t k) const { return amps_[k]; }
  Complex& operator[](std::size_t k) { return amps_[k]; }

  double norm() const;
  void normalize();

 private:
  std::size_t n_ = 0;
  std::vector<Complex> amps_;
};

/// <bra|ket>
Complex inner(const StateVector& bra, const StateVector& ket);

/// |low> (x) |high>: low occupies qubits [0, n_low), high the qubits above.
StateVector tensor(const StateVector& low, const StateVector& high);

/// <bra| sigma(key) |ket> for the phase-free Pauli string `key`.
Complex pauli_element(const StateVector& bra, const PauliKey& key, const StateVector& ket);

StateVector apply(const PauliProduct& p, const StateVector& psi);
StateVector apply(const PauliSum& op, const StateVector& psi);

/// <psi|op|psi>
Complex expectation(const StateVector& psi, const PauliSum& op);
/// <bra|op|ket>
Complex matrix_element_exact(const StateVector& bra, const PauliSum& op, const StateVector& ket);

/// (|0>|a> + |1>|b>)/sqrt(2) with the ancilla as the most significant qubit
/// (index n of the returned (n+1)-qubit register).
StateVector prepare_swap_state(const StateVector& a, const StateVector& b);

/// U|psi> for the CNOT/permutation Clifford U.
StateVector apply_clifford(const CliffordMap& c, const StateVector& psi);

// ---------------------------------------------------------------------------
// Shot sampling

struct ShotResult {
  double estimate = 0.0;
  std::size_t shots = 0;
  std::size_t fragment_id = 0;
  std::uint64_t seed = 0;
};

/// Exact distribution of the value of a commuting fragment under a joint
/// measurement of its Pauli terms.
class OutcomeDistribution {
 public:
  OutcomeDistribution() = default;
  OutcomeDistribution(std::vector<double> values, std::vector<double> probabilities);

  std::span<const double> values() const { return values_; }
  std::span<const double> probabilities() const { return probs_; }
  double mean() const;
  double variance() const;

  /// One single-shot outcome.
  double draw(std::mt19937_64& rng) const;

 private:
  std::vector<double> values_;
  std::vector<double> probs_;
  std::vector<double> cdf_;
};

/// Distribution of one-shot outcomes of `fragment` on `psi`. Throws
/// ContractViolation when the fragment's terms do not commute pairwise or a
/// coefficient is not real.
OutcomeDistribution fragment_distribution(const StateVector& psi, const PauliSum& fragment);

/// Sample mean of `shots` single-shot outcomes; deterministic for a seed.
ShotResult sample_fragment(const StateVector& psi, const PauliSum& fragment, std::size_t shots,
                           std::uint64_t seed, std::size_t fragment_id = 0);
ShotResult sample_distribution(const OutcomeDistribution& dist, std::size_t shots,
                               std::uint64_t seed, std::size_t fragment_id = 0);

/// Per-task seed derived from a global seed and task coordinates
/// (splitmix64 mixing), so concurrent tasks own independent streams.
std::uint64_t derive_seed(std::uint64_t global_seed, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

}  // namespace qsense
