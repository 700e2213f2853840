#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "qsense/pauli.hpp"
#include "qsense/statevector.hpp"
#include "qsense/taper.hpp"

namespace qsense {

/// Hermitian operator on n_orb + 1 qubits (ancilla = qubit n_orb) whose
/// expectation on (|0>|a> + |1>|b>)/sqrt(2) is Re <a|X|b>.
struct SwapTestOperator {
  PauliSum op;
  double c_x = 0.0;  // coefficient of x (x) 1
  bool shifted = false;
};

/// Each term c P becomes Re(c) x (x) P - Im(c) y (x) P, dropping zero parts.
/// For real states only one of the two survives per term.
SwapTestOperator build_swap_operator(const EffectiveHamiltonian& x);

/// Replaces c_x by c_x - (h_mm + h_nn)/2. Only valid when the two tapered
/// states are orthogonal, which holds for distinct states sharing a
/// seniority configuration.
SwapTestOperator shift_constant(SwapTestOperator s, double h_mm, double h_nn);

struct FragmentSet {
  std::vector<PauliSum> fragments;
  std::size_t source_terms = 0;

  /// Sum of all fragments.
  PauliSum sum() const;
};

/// Greedy grouping: terms by decreasing |c| (ties by key), each into the
/// first fragment it commutes with entirely. The identity goes to fragment 0.
FragmentSet sorted_insertion(const PauliSum& op);

/// True when every fragment is internally commuting and the fragments sum
/// to `op` term by term.
bool verify_fragments(const FragmentSet& f, const PauliSum& op);

/// <F^2> - <F>^2, clamped at zero.
double fragment_variance(const StateVector& psi, const PauliSum& fragment);

/// sigma = sum_a sigma_a with sigma_a the fragment standard deviations.
struct ElementVariance {
  double sigma = 0.0;
  std::vector<double> fragment_sigma;
};
ElementVariance element_variance(const StateVector& psi, const FragmentSet& f);
/// Shot share per fragment, proportional to sigma_a. All zero when sigma is 0.
std::vector<double> fragment_proportions(const ElementVariance& v);

/// Measurement recipe for one matrix element: an observable, the state it is
/// measured on and its fragments.
struct ElementMeasurement {
  PauliSum op;
  StateVector state;
  FragmentSet fragments;
  bool swap_test = false;
};

ElementMeasurement plan_diagonal(const EffectiveHamiltonian& x, const StateVector& phi);
/// `shift` applies the constant-shift optimization with the given diagonal
/// values; the caller guarantees the tapered states are orthogonal.
ElementMeasurement plan_off_diagonal(const EffectiveHamiltonian& x, const StateVector& bra,
                                     const StateVector& ket, bool shift, double h_mm, double h_nn);

/// Shot-count independent cost of estimating the ground energy from a
/// subspace matrix with per-element standard deviations sigma.
struct CostReport {
  Eigen::MatrixXd sigma;
  Eigen::VectorXd c0;
  /// eps^2 M = (sum_mu c_mu^2 sigma_mumu + 2 sum_{mu<nu} |c_mu c_nu| sigma_munu)^2
  double metric = 0.0;
  /// Upper-triangular shot proportions M_munu / M; sums to 1 unless metric is 0.
  Eigen::MatrixXd allocation;
};

/// Throws InputError unless sigma is square, symmetric, nonnegative and
/// |c0| = 1.
CostReport allocate_and_score(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& c0);

/// First-order mean-square error sum_e w_e sigma_e^2 / (M p_e) for the
/// upper-triangular proportions p (w = c^4 on the diagonal, 4 c^2 c^2 off it).
double first_order_mse(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& c0,
                       const Eigen::MatrixXd& proportions, double total_shots);

}  // namespace qsense
