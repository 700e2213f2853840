#include "qsense/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>

#include "qsense/error.hpp"
#include "qsense/kernels.hpp"

namespace qsense {

namespace {

constexpr std::size_t kMaxStateQubits = 30;

void check_dims(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw InputError("state dimension mismatch: " + std::to_string(a.n_qubits()) + " vs " +
                     std::to_string(b.n_qubits()) + " qubits");
  }
}

void check_op(const StateVector& psi, std::size_t op_qubits) {
  if (psi.n_qubits() != op_qubits) {
    throw InputError("operator acts on " + std::to_string(op_qubits) + " qubits, state has " +
                     std::to_string(psi.n_qubits()));
  }
}

Complex i_pow(std::size_t k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

StateVector::StateVector(std::size_t n_qubits) : n_(n_qubits) {
  if (n_qubits > kMaxStateQubits) {
    throw InputError("statevector limited to " + std::to_string(kMaxStateQubits) + " qubits");
  }
  amps_.assign(std::size_t{1} << n_qubits, Complex{});
  amps_[0] = 1.0;
}

StateVector::StateVector(std::size_t n_qubits, std::vector<Complex> amplitudes)
    : n_(n_qubits), amps_(std::move(amplitudes)) {
  if (n_qubits > kMaxStateQubits) {
    throw InputError("statevector limited to " + std::to_string(kMaxStateQubits) + " qubits");
  }
  if (amps_.size() != (std::size_t{1} << n_qubits)) {
    throw InputError("amplitude count does not match 2^n");
  }
}

StateVector StateVector::basis_state(std::size_t n_qubits, std::uint64_t index) {
  StateVector s(n_qubits);
  if (index >= s.dim()) throw InputError("basis index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

double StateVector::norm() const { return std::sqrt(kernels::active().norm_squared(amps_)); }

void StateVector::normalize() {
  const double nrm = norm();
  if (nrm == 0.0) throw InputError("cannot normalize the zero vector");
  for (auto& a : amps_) a /= nrm;
}

Complex inner(const StateVector& bra, const StateVector& ket) {
  check_dims(bra, ket);
  return kernels::active().pauli_inner(bra.amplitudes(), ket.amplitudes(), 0, 0);
}

StateVector tensor(const StateVector& low, const StateVector& high) {
  std::vector<Complex> amps(low.dim() * high.dim());
  for (std::size_t h = 0; h < high.dim(); ++h) {
    for (std::size_t l = 0; l < low.dim(); ++l) amps[h * low.dim() + l] = high[h] * low[l];
  }
  return StateVector(low.n_qubits() + high.n_qubits(), std::move(amps));
}

Complex pauli_element(const StateVector& bra, const PauliKey& key, const StateVector& ket) {
  check_dims(bra, ket);
  if (key.x[1] != 0 || key.z[1] != 0 ||
      ((key.x[0] | key.z[0]) >> std::min<std::size_t>(ket.n_qubits(), 63)) > 0) {
    throw InputError("Pauli string has support outside the state register");
  }
  return i_pow(key.y_count()) *
         kernels::active().pauli_inner(bra.amplitudes(), ket.amplitudes(), key.x[0], key.z[0]);
}

StateVector apply(const PauliProduct& p, const StateVector& psi) {
  check_op(psi, p.n_qubits());
  StateVector out(psi.n_qubits(), std::vector<Complex>(psi.dim()));
  const Complex factor = p.phase_factor() * i_pow(p.y_count());
  kernels::active().pauli_accumulate(out.amplitudes(), psi.amplitudes(), p.key().x[0],
                                     p.key().z[0], factor);
  return out;
}

StateVector apply(const PauliSum& op, const StateVector& psi) {
  check_op(psi, op.n_qubits());
  StateVector out(psi.n_qubits(), std::vector<Complex>(psi.dim()));
  const auto& k = kernels::active();
  for (const auto& [key, c] : op) {
    k.pauli_accumulate(out.amplitudes(), psi.amplitudes(), key.x[0], key.z[0],
                       c * i_pow(key.y_count()));
  }
  return out;
}

Complex matrix_element_exact(const StateVector& bra, const PauliSum& op, const StateVector& ket) {
  check_dims(bra, ket);
  check_op(ket, op.n_qubits());
  Complex total{};
  for (const auto& [key, c] : op) total += c * pauli_element(bra, key, ket);
  return total;
}

Complex expectation(const StateVector& psi, const PauliSum& op) {
  return matrix_element_exact(psi, op, psi);
}

StateVector prepare_swap_state(const StateVector& a, const StateVector& b) {
  check_dims(a, b);
  std::vector<Complex> amps(2 * a.dim());
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t k = 0; k < a.dim(); ++k) {
    amps[k] = r * a[k];
    amps[a.dim() + k] = r * b[k];
  }
  StateVector out(a.n_qubits() + 1, std::move(amps));
  out.normalize();
  return out;
}

StateVector apply_clifford(const CliffordMap& c, const StateVector& psi) {
  check_op(psi, c.n_qubits());
  std::vector<Complex> cur(psi.amplitudes().begin(), psi.amplitudes().end());
  std::vector<Complex> next(cur.size());
  for (const auto& gate : c.gates()) {
    if (const auto* g = std::get_if<Cnot>(&gate)) {
      const std::uint64_t cm = std::uint64_t{1} << g->control;
      const std::uint64_t tm = std::uint64_t{1} << g->target;
      for (std::uint64_t k = 0; k < cur.size(); ++k) {
        if ((k & cm) && !(k & tm)) std::swap(cur[k], cur[k | tm]);
      }
    } else {
      const auto& dest = std::get<QubitPermutation>(gate).destination;
      for (std::uint64_t k = 0; k < cur.size(); ++k) {
        std::uint64_t moved = 0;
        for (std::size_t q = 0; q < dest.size(); ++q) moved |= ((k >> q) & 1U) << dest[q];
        next[moved] = cur[k];
      }
      cur.swap(next);
    }
  }
  return StateVector(psi.n_qubits(), std::move(cur));
}

// ---------------------------------------------------------------------------
// Sampling

OutcomeDistribution::OutcomeDistribution(std::vector<double> values,
                                         std::vector<double> probabilities)
    : values_(std::move(values)), probs_(std::move(probabilities)) {
  if (values_.size() != probs_.size() || values_.empty()) {
    throw InputError("outcome distribution needs matching, nonempty value/probability lists");
  }
  const double total = std::accumulate(probs_.begin(), probs_.end(), 0.0);
  cdf_.resize(probs_.size());
  double run = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    probs_[i] /= total;
    run += probs_[i];
    cdf_[i] = run;
  }
  cdf_.back() = 1.0;
}

double OutcomeDistribution::mean() const {
  return std::inner_product(values_.begin(), values_.end(), probs_.begin(), 0.0);
}

double OutcomeDistribution::variance() const {
  const double m = mean();
  double v = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) v += probs_[i] * (values_[i] - m) * (values_[i] - m);
  return v;
}

double OutcomeDistribution::draw(std::mt19937_64& rng) const {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()),
                                         values_.size() - 1);
  return values_[idx];
}

namespace {

struct Generator {
  PauliKey row;          // reduced symplectic vector
  std::uint64_t combo;   // which generators XOR into `row`
};

int leading_bit(const PauliKey& k) {
  for (int w = 1; w >= 0; --w) {
    if (k.z[w]) return 128 + 64 * w + 63 - std::countl_zero(k.z[w]);
    if (k.x[w]) return 64 * w + 63 - std::countl_zero(k.x[w]);
  }
  return -1;
}

void xor_into(PauliKey& a, const PauliKey& b) {
  for (std::size_t w = 0; w < 2; ++w) {
    a.x[w] ^= b.x[w];
    a.z[w] ^= b.z[w];
  }
}

}  // namespace

OutcomeDistribution fragment_distribution(const StateVector& psi, const PauliSum& fragment) {
  check_op(psi, fragment.n_qubits());
  const std::size_t n = psi.n_qubits();

  double offset = 0.0;
  std::vector<PauliKey> keys;
  std::vector<double> coeffs;
  for (const auto& [k, c] : fragment) {
    if (std::abs(c.imag()) > 1e-12 * std::max(1.0, std::abs(c))) {
      throw ContractViolation("fragment coefficients must be real (Hermitian fragment)");
    }
    if (k.is_identity()) {
      offset += c.real();
    } else {
      keys.push_back(k);
      coeffs.push_back(c.real());
    }
  }
  for (std::size_t a = 0; a < keys.size(); ++a) {
    for (std::size_t b = a + 1; b < keys.size(); ++b) {
      if (!commutes(keys[a], keys[b])) {
        throw ContractViolation("fragment contains anticommuting terms " +
                                PauliProduct(n, keys[a]).to_string() + " and " +
                                PauliProduct(n, keys[b]).to_string());
      }
    }
  }

  // Independent generators by GF(2) elimination; each term is recorded as a
  // product of generators times a sign.
  std::vector<PauliKey> generators;
  std::vector<Generator> pivots(256, Generator{{}, 0});
  std::vector<bool> has_pivot(256, false);
  std::vector<std::uint64_t> term_combo(keys.size());
  for (std::size_t j = 0; j < keys.size(); ++j) {
    PauliKey row = keys[j];
    std::uint64_t combo = 0;
    for (int lb = leading_bit(row); lb >= 0; lb = leading_bit(row)) {
      if (!has_pivot[lb]) break;
      xor_into(row, pivots[lb].row);
      combo ^= pivots[lb].combo;
    }
    const int lb = leading_bit(row);
    if (lb >= 0) {
      if (generators.size() >= 64) throw ContractViolation("too many independent generators");
      const std::uint64_t own = std::uint64_t{1} << generators.size();
      generators.push_back(keys[j]);
      pivots[lb] = Generator{row, combo ^ own};
      has_pivot[lb] = true;
      term_combo[j] = own;
    } else {
      term_combo[j] = combo;
    }
  }
  std::vector<double> term_sign(keys.size(), 1.0);
  for (std::size_t j = 0; j < keys.size(); ++j) {
    PauliProduct prod(n);
    for (std::size_t g = 0; g < generators.size(); ++g) {
      if ((term_combo[j] >> g) & 1U) prod = prod * PauliProduct(n, generators[g]);
    }
    if (prod.key() != keys[j]) throw ContractViolation("generator decomposition failed");
    // sigma(key_j) = i^{-phase} * prod; commuting Hermitian factors give phase 0 or 2.
    term_sign[j] = prod.phase() == 0 ? 1.0 : -1.0;
  }

  // Branch on each generator's eigenvalue with projectors (1 +/- G)/2.
  std::vector<double> values;
  std::vector<double> probs;
  const double prune = 1e-15;
  std::function<void(const StateVector&, std::size_t, std::uint64_t)> branch =
      [&](const StateVector& state, std::size_t g, std::uint64_t pattern) {
        if (g == generators.size()) {
          double value = offset;
          for (std::size_t j = 0; j < keys.size(); ++j) {
            const int parity = std::popcount(term_combo[j] & pattern) & 1;
            value += coeffs[j] * term_sign[j] * (parity ? -1.0 : 1.0);
          }
          values.push_back(value);
          probs.push_back(kernels::active().norm_squared(state.amplitudes()));
          return;
        }
        const StateVector gpsi = apply(PauliProduct(n, generators[g]), state);
        for (int s = 0; s < 2; ++s) {
          const double sign = s == 0 ? 1.0 : -1.0;
          std::vector<Complex> proj(state.dim());
          for (std::size_t k = 0; k < state.dim(); ++k) proj[k] = 0.5 * (state[k] + sign * gpsi[k]);
          StateVector child(n, std::move(proj));
          if (kernels::active().norm_squared(child.amplitudes()) < prune) continue;
          branch(child, g + 1, pattern | (static_cast<std::uint64_t>(s) << g));
        }
      };
  branch(psi, 0, 0);
  return OutcomeDistribution(std::move(values), std::move(probs));
}

ShotResult sample_distribution(const OutcomeDistribution& dist, std::size_t shots,
                               std::uint64_t seed, std::size_t fragment_id) {
  if (shots == 0) throw InputError("shots must be at least 1");
  // Outcome counts are multinomial; conditional binomials keep the cost
  // independent of the shot count.
  std::mt19937_64 rng(seed);
  const auto values = dist.values();
  const auto probs = dist.probabilities();
  double total = 0.0;
  double mass_left = 1.0;
  std::size_t left = shots;
  for (std::size_t k = 0; k < values.size() && left > 0; ++k) {
    std::size_t count = left;
    if (k + 1 < values.size()) {
      const double p = mass_left > 0.0 ? std::clamp(probs[k] / mass_left, 0.0, 1.0) : 1.0;
      count = std::binomial_distribution<std::size_t>(left, p)(rng);
    }
    total += static_cast<double>(count) * values[k];
    left -= count;
    mass_left -= probs[k];
  }
  return ShotResult{total / static_cast<double>(shots), shots, fragment_id, seed};
}

ShotResult sample_fragment(const StateVector& psi, const PauliSum& fragment, std::size_t shots,
                           std::uint64_t seed, std::size_t fragment_id) {
  if (shots == 0) throw InputError("shots must be at least 1");
  return sample_distribution(fragment_distribution(psi, fragment), shots, seed, fragment_id);
}

std::uint64_t derive_seed(std::uint64_t global_seed, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(global_seed);
  h = mix(h ^ a);
  h = mix(h ^ b);
  h = mix(h ^ c);
  return h;
}

}  // namespace qsense
