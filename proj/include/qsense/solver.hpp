#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qsense/csf.hpp"
#include "qsense/fermion.hpp"
#include "qsense/measure.hpp"
#include "qsense/pauli.hpp"
#include "qsense/statevector.hpp"
#include "qsense/taper.hpp"

namespace qsense {

// ---------------------------------------------------------------------------
// Eigenproblems

struct EigenPair {
  double e_min = 0.0;
  Eigen::VectorXd c0;
};

/// Lowest eigenpair of a real symmetric matrix. The largest-magnitude entry of
/// c0 is made positive. A degenerate ground level is resolved by projecting
/// the lowest-index unit vector with nonzero weight onto it.
EigenPair ground_state(const Eigen::MatrixXd& h);

struct ComplexEigenPair {
  double e_min = 0.0;
  Eigen::VectorXcd c0;
};
/// Hermitian variant; the largest-magnitude entry is made real positive.
ComplexEigenPair ground_state(const Eigen::MatrixXcd& h);

// ---------------------------------------------------------------------------
// Matrix elements

/// A basis state after preparation on the tapered register.
struct PreparedState {
  SeniorityConfig config;
  StateVector state;
};

/// Evaluates subspace matrix elements on the tapered register. Effective
/// operators are cached per (bra, ket) seniority pair.
class SubspaceEvaluator {
 public:
  SubspaceEvaluator(const PauliSum& hq, std::size_t n_orb, std::size_t n_elec);

  std::size_t n_orb() const { return n_orb_; }
  std::size_t n_elec() const { return n_elec_; }
  const TaperedHamiltonian& tapered() const { return tapered_; }

  PreparedState prepare(const BasisState& s) const;
  std::vector<PreparedState> prepare(const std::vector<BasisState>& basis) const;

  const EffectiveHamiltonian& effective(const SeniorityConfig& bra, const SeniorityConfig& ket);

  /// Re <a|H|b>; the imaginary part vanishes for the real basis states used here.
  double element(const PreparedState& a, const PreparedState& b);
  Eigen::MatrixXd matrix(const std::vector<PreparedState>& states);
  /// Recomputes row and column mu of h in place.
  void update_row(Eigen::MatrixXd& h, const std::vector<PreparedState>& states, std::size_t mu);

 private:
  struct Cached {
    EffectiveHamiltonian eff;
    Eigen::SparseMatrix<Complex> mat;
  };
  const Cached& cached(const SeniorityConfig& bra, const SeniorityConfig& ket);

  std::size_t n_orb_;
  std::size_t n_elec_;
  TaperedHamiltonian tapered_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, Cached> cache_;
};

/// Throws ContractViolation when two states with equal seniority configuration
/// overlap by more than tol or a state is not normalized. States in different
/// configurations are orthogonal by symmetry.
void check_orthonormal(const std::vector<PreparedState>& states, double tol = 1e-8);

/// Sparse matrix of a Pauli sum in the computational basis.
Eigen::SparseMatrix<Complex> sparse_matrix(const PauliSum& op);

// ---------------------------------------------------------------------------
// Sampled estimation

/// Precomputed one-shot outcome distributions of every fragment of one
/// matrix-element measurement.
class ElementSampler {
 public:
  explicit ElementSampler(const ElementMeasurement& m);

  double exact() const { return exact_; }
  double sigma() const { return sigma_; }
  const std::vector<double>& fragment_sigma() const { return fragment_sigma_; }
  std::size_t fragment_count() const { return dists_.size(); }

  /// Splits `shots` over fragments in proportion to their standard deviations
  /// and returns the summed sample means. Zero-variance fragments contribute
  /// their exact value without shots.
  double estimate(std::size_t shots, std::uint64_t seed, std::size_t* used = nullptr) const;

 private:
  std::vector<OutcomeDistribution> dists_;
  std::vector<double> fragment_sigma_;
  double sigma_ = 0.0;
  double exact_ = 0.0;
};

/// True when both states are bare CSFs, whose elements a classical computer
/// evaluates directly.
bool classically_evaluable(const BasisState& a, const BasisState& b);

/// Measurement recipe for element (mu, nu). Off-diagonal elements use the swap
/// test; the constant shift applies only when the configs match.
ElementMeasurement plan_element(SubspaceEvaluator& ev, const PreparedState& a, const PreparedState& b,
                                bool diagonal, bool constant_shift, double h_mm, double h_nn);

struct SamplingOptions {
  std::size_t shots = 0;  // total budget over all measured elements
  std::uint64_t seed = 0;
  bool constant_shift = true;
};

struct ElementRecord {
  std::size_t mu = 0;
  std::size_t nu = 0;
  double exact = 0.0;
  double value = 0.0;
  double sigma = 0.0;
  std::size_t shots = 0;
  std::size_t fragments = 0;
  std::size_t terms = 0;
  double one_norm = 0.0;
  bool classical = false;
};

struct SubspaceProblem {
  Eigen::MatrixXd hmat;
  std::vector<BasisState> basis;
  double e_min = 0.0;
  Eigen::VectorXd c0;
  std::vector<ElementRecord> elements;  // upper triangle, row-major
  std::optional<CostReport> cost;
};

/// Exact matrix when `sampling` is empty. Otherwise every quantum element is
/// estimated from shots allotted by the optimal allocation for the exact
/// ground vector; bare-CSF pairs stay exact. The basis must be orthonormal.
SubspaceProblem build_subspace(const std::vector<BasisState>& basis, SubspaceEvaluator& ev,
                               const std::optional<SamplingOptions>& sampling = std::nullopt);

/// Per-element sigma (zero for classical elements) and the allocation for the
/// exact ground vector.
CostReport cost_report(const std::vector<BasisState>& basis, SubspaceEvaluator& ev,
                       bool constant_shift = true);

// ---------------------------------------------------------------------------
// Full configuration interaction

struct FciOptions {
  /// Adds penalty * S^2 so the lowest root is a singlet.
  bool singlet = false;
  double penalty = 1.0;
  /// Sector dimensions below this use a dense eigensolver, Lanczos above.
  std::size_t dense_limit = 4096;
};

struct FciResult {
  double energy = 0.0;
  std::size_t n_elec = 0;
  double sz = 0.0;
  std::size_t dimension = 0;
  std::vector<std::uint64_t> determinants;
  Eigen::VectorXd vector;
};

/// Lowest eigenvalue of hq in the (N, S_z) sector of the interleaved
/// spin-orbital layout. Throws SectorError for an empty sector.
FciResult fci_oracle(const PauliSum& hq, std::size_t n_elec, double sz, const FciOptions& opt = {});

// ---------------------------------------------------------------------------
// Variational optimization

struct VoOptions {
  double tol = 1e-7;
  std::size_t max_sweeps = 40;
  double initial_kick = 1e-2;
  std::size_t grid_points = 12;
  bool polish = true;
};

struct VoResult {
  std::vector<BasisState> basis;
  double energy = 0.0;
  std::vector<double> history;  // best energy after each sweep
  std::size_t sweeps = 0;
  bool converged = false;
};

/// Minimizes the subspace ground energy over every rotation angle: coordinate
/// sweeps (grid scan + Brent per angle), then a finite-difference BFGS polish.
/// States in one seniority configuration with the same rotation at the same
/// position share that angle, which keeps them orthogonal.
VoResult vo_optimize(std::vector<BasisState> basis, SubspaceEvaluator& ev, const VoOptions& opt = {});

// ---------------------------------------------------------------------------
// Orbital relaxation

struct RelaxOptions {
  /// Occupied-virtual rotations only unless set.
  bool full = false;
  std::size_t max_iterations = 60;
  double tol = 1e-8;
};

struct RelaxResult {
  OrbitalRotation rotation{0};
  double initial = 0.0;
  double energy = 0.0;
  std::vector<double> history;
  bool converged = false;
};

RelaxResult relax_orbitals(const std::vector<BasisState>& basis, const FermionIntegrals& ints,
                           const RelaxOptions& opt = {});

// ---------------------------------------------------------------------------

/// Quasi-Newton minimizer with central-difference gradients. Returns the
/// argument of the best point seen; the objective never increases.
struct MinimizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};
template <class F>
MinimizeResult bfgs_fd(F&& f, Eigen::VectorXd x, std::size_t max_iter, double tol, double step = 1e-5);

}  // namespace qsense

#include "qsense/detail/bfgs.hpp"
