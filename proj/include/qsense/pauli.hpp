#pragma once

#include <array>
#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace qsense {

using Complex = std::complex<double>;

/// Largest register a PauliProduct can describe (two packed 64-bit words per
/// symplectic half).
inline constexpr std::size_t kMaxQubits = 128;

/// Coefficients whose magnitude falls below this are removed from a PauliSum.
inline constexpr double kDefaultDropTolerance = 1e-12;

/// Single-qubit Pauli; bit 0 is the x component and bit 1 the z component.
enum class Pauli : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

/// Phase-free symplectic description of a Pauli string.
struct PauliKey {
  std::array<std::uint64_t, 2> x{};
  std::array<std::uint64_t, 2> z{};

  auto operator<=>(const PauliKey&) const = default;

  bool is_identity() const { return (x[0] | x[1] | z[0] | z[1]) == 0; }
  bool get_x(std::size_t q) const { return (x[q >> 6] >> (q & 63)) & 1U; }
  bool get_z(std::size_t q) const { return (z[q >> 6] >> (q & 63)) & 1U; }
  void set_x(std::size_t q, bool v);
  void set_z(std::size_t q, bool v);
  std::size_t weight() const;
  std::size_t y_count() const;
};

/// A Pauli string i^phase * (sigma_0 (x) sigma_1 (x) ...), with per-qubit
/// sigma in {I, X, Y, Z} fixed by the (x, z) bits: (1,0)=X, (0,1)=Z, (1,1)=Y.
class PauliProduct {
 public:
  PauliProduct() = default;
  explicit PauliProduct(std::size_t n_qubits);
  PauliProduct(std::size_t n_qubits, const PauliKey& key, int phase = 0);

  /// Builds a product from (qubit, Pauli) factors; repeated qubits multiply.
  static PauliProduct from_ops(std::size_t n_qubits,
                               std::initializer_list<std::pair<std::size_t, Pauli>> ops);
  static PauliProduct single(std::size_t n_qubits, std::size_t qubit, Pauli p);

  std::size_t n_qubits() const { return n_; }
  const PauliKey& key() const { return key_; }
  /// Exponent k of the i^k prefactor, in [0, 4).
  int phase() const { return phase_; }
  Complex phase_factor() const;

  Pauli op(std::size_t q) const;
  void set(std::size_t q, Pauli p);
  void set_phase(int phase) { phase_ = ((phase % 4) + 4) % 4; }

  bool is_identity() const { return key_.is_identity(); }
  std::size_t weight() const { return key_.weight(); }
  std::size_t y_count() const { return key_.y_count(); }

  /// Restriction to qubits [first, first + count), relabelled from 0, phase 0.
  PauliProduct slice(std::size_t first, std::size_t count) const;

  /// "X0 Z3 Y5", or "I" for the identity; the phase is not printed.
  std::string to_string() const;

  bool operator==(const PauliProduct&) const = default;

 private:
  std::size_t n_ = 0;
  PauliKey key_{};
  int phase_ = 0;
};

/// Product a*b with exact phase tracking.
PauliProduct operator*(const PauliProduct& a, const PauliProduct& b);
/// Exponent k such that sigma(a) * sigma(b) = i^k sigma(a ^ b) for phase-free keys.
int product_phase(const PauliKey& a, const PauliKey& b);
bool commutes(const PauliProduct& a, const PauliProduct& b);
bool commutes(const PauliKey& a, const PauliKey& b);

/// Weighted sum of phase-free Pauli strings. Terms are kept ordered by key so
/// iteration (and therefore every derived quantity) is deterministic.
class PauliSum {
 public:
  using TermMap = std::map<PauliKey, Complex>;
  using const_iterator = TermMap::const_iterator;

  explicit PauliSum(std::size_t n_qubits = 0, double drop_tolerance = kDefaultDropTolerance);

  static PauliSum identity(std::size_t n_qubits, Complex c = 1.0);
  static PauliSum from_product(const PauliProduct& p, Complex c = 1.0);

  std::size_t n_qubits() const { return n_; }
  double drop_tolerance() const { return tol_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const_iterator begin() const { return terms_.begin(); }
  const_iterator end() const { return terms_.end(); }
  const TermMap& terms() const { return terms_; }

  /// Adds c * p, absorbing the product's phase into the coefficient.
  void add(const PauliProduct& p, Complex c);
  void add(const PauliKey& key, Complex c);
  void erase(const PauliKey& key) { terms_.erase(key); }

  Complex coefficient(const PauliKey& key) const;
  Complex constant() const { return coefficient(PauliKey{}); }

  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator-=(const PauliSum& other);
  PauliSum& operator*=(Complex c);

  /// Hermitian conjugate (conjugates every coefficient).
  PauliSum adjoint() const;
  bool is_hermitian(double tol = 1e-12) const;

  /// One "c * X0 Z3" line per term.
  std::string to_string() const;
  static PauliSum parse(std::string_view text, std::size_t n_qubits);

  /// Exact term-by-term equality.
  bool operator==(const PauliSum& o) const { return n_ == o.n_ && terms_ == o.terms_; }

 private:
  std::size_t n_ = 0;
  double tol_ = kDefaultDropTolerance;
  TermMap terms_;
};

PauliSum operator+(PauliSum a, const PauliSum& b);
PauliSum operator-(PauliSum a, const PauliSum& b);
PauliSum operator*(const PauliSum& a, const PauliSum& b);
PauliSum operator*(PauliSum a, Complex c);
PauliSum operator*(Complex c, PauliSum a);

/// Commutator a*b - b*a.
PauliSum commutator(const PauliSum& a, const PauliSum& b);

/// Sum of coefficient magnitudes; the identity term is skipped when
/// exclude_identity is set.
double one_norm(const PauliSum& s, bool exclude_identity = false);

/// Merges duplicates and drops terms with |c| < tol.
PauliSum simplify(const PauliSum& s, double tol);

/// Text form of one term: "c * X0 Z3 Y5" with c printed as a real number or
/// "(re,im)".
std::string format_term(const PauliKey& key, Complex c);
std::pair<PauliProduct, Complex> parse_term(std::string_view text, std::size_t n_qubits);

// Clifford maps restricted to CNOT and qubit permutations.

struct Cnot {
  std::size_t control;
  std::size_t target;
};

/// Moves the state of qubit q to position destination[q].
struct QubitPermutation {
  std::vector<std::size_t> destination;
};

using CliffordGate = std::variant<Cnot, QubitPermutation>;

class CliffordMap {
 public:
  explicit CliffordMap(std::size_t n_qubits = 0) : n_(n_qubits) {}

  std::size_t n_qubits() const { return n_; }
  const std::vector<CliffordGate>& gates() const { return gates_; }

  CliffordMap& cnot(std::size_t control, std::size_t target);
  CliffordMap& permute(std::vector<std::size_t> destination);

  /// Map undoing this one (gates reversed, each inverted).
  CliffordMap inverse() const;

 private:
  std::size_t n_ = 0;
  std::vector<CliffordGate> gates_;
};

/// Returns U p U^dagger for the Clifford U described by c, gates applied in order.
PauliProduct conjugate(const PauliProduct& p, const CliffordMap& c);
PauliSum conjugate(const PauliSum& s, const CliffordMap& c);

}  // namespace qsense
