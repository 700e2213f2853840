#include "qsense/taper.hpp"

#include <bit>
#include <cmath>

#include "qsense/error.hpp"

namespace qsense {

namespace {

Complex i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

std::uint64_t low_mask(std::size_t n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

void check_configs(const SeniorityConfig& bra, const SeniorityConfig& ket, std::size_t n_orb) {
  if (bra.n_orb != n_orb || ket.n_orb != n_orb) {
    throw InputError("seniority config length does not match the orbital count");
  }
}

}  // namespace

SeniorityConfig::SeniorityConfig(std::size_t n, std::uint64_t b) : n_orb(n), bits(b) {
  if (n > 32) throw InputError("at most 32 orbitals are supported");
  if ((b & ~low_mask(n)) != 0) throw InputError("seniority bits outside the orbital range");
}

SeniorityConfig SeniorityConfig::from_vector(const std::vector<int>& v) {
  std::uint64_t b = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0 && v[i] != 1) throw InputError("orbital seniority entries must be 0 or 1");
    if (v[i]) b |= std::uint64_t{1} << i;
  }
  return SeniorityConfig(v.size(), b);
}

std::size_t SeniorityConfig::seniority() const { return static_cast<std::size_t>(std::popcount(bits)); }

std::vector<int> SeniorityConfig::to_vector() const {
  std::vector<int> v(n_orb);
  for (std::size_t i = 0; i < n_orb; ++i) v[i] = unpaired(i) ? 1 : 0;
  return v;
}

std::string SeniorityConfig::to_string() const {
  std::string s(n_orb, '0');
  for (std::size_t i = 0; i < n_orb; ++i)
    if (unpaired(i)) s[i] = '1';
  return s;
}

std::vector<PauliProduct> seniority_symmetries(std::size_t n_orb) {
  if (n_orb == 0) throw InputError("need at least one orbital");
  std::vector<PauliProduct> out;
  for (std::size_t i = 0; i < n_orb; ++i) {
    out.push_back(PauliProduct::from_ops(2 * n_orb, {{2 * i, Pauli::Z}, {2 * i + 1, Pauli::Z}}));
  }
  return out;
}

CliffordMap build_clifford(std::size_t n_orb) {
  if (n_orb == 0) throw InputError("need at least one orbital");
  CliffordMap c(2 * n_orb);
  for (std::size_t i = 0; i < n_orb; ++i) c.cnot(2 * i + 1, 2 * i);
  std::vector<std::size_t> dest(2 * n_orb);
  for (std::size_t i = 0; i < n_orb; ++i) {
    dest[2 * i] = i;
    dest[2 * i + 1] = n_orb + i;
  }
  c.permute(std::move(dest));
  return c;
}

EffectiveHamiltonian effective_hamiltonian(const PauliSum& hq, const SeniorityConfig& bra,
                                           const SeniorityConfig& ket, const CliffordMap& uc) {
  const std::size_t n = bra.n_orb;
  check_configs(bra, ket, n);
  if (hq.n_qubits() != 2 * n || uc.n_qubits() != 2 * n) {
    throw InputError("operator and Clifford must act on 2 n_orb qubits");
  }
  const std::uint64_t lmask = low_mask(n);
  PauliSum op(n);
  for (const auto& [key, c] : hq) {
    const PauliProduct p = conjugate(PauliProduct(2 * n, key), uc);
    const std::uint64_t xl = p.key().x[0] & lmask;
    const std::uint64_t zl = p.key().z[0] & lmask;
    if (xl != (bra.bits ^ ket.bits)) continue;
    const int phase = p.phase() + std::popcount(xl & zl) + 2 * (std::popcount(ket.bits & zl) & 1);
    PauliKey right;
    right.x[0] = p.key().x[0] >> n;
    right.z[0] = p.key().z[0] >> n;
    op.add(right, c * i_pow(phase));
  }
  return {std::move(op), bra, ket};
}

TaperedHamiltonian::TaperedHamiltonian(const PauliSum& hq, std::size_t n_orb)
    : n_orb_(n_orb), source_terms_(hq.size()), source_one_norm_(one_norm(hq)), uc_(build_clifford(n_orb)) {
  if (hq.n_qubits() != 2 * n_orb) throw InputError("operator must act on 2 n_orb qubits");
  const std::uint64_t lmask = low_mask(n_orb);
  for (const auto& [key, c] : hq) {
    const PauliProduct p = conjugate(PauliProduct(2 * n_orb, key), uc_);
    const std::uint64_t xl = p.key().x[0] & lmask;
    const std::uint64_t zl = p.key().z[0] & lmask;
    PauliKey right;
    right.x[0] = p.key().x[0] >> n_orb;
    right.z[0] = p.key().z[0] >> n_orb;
    buckets_[xl].push_back({zl, right, c * i_pow(p.phase() + std::popcount(xl & zl))});
  }
}

EffectiveHamiltonian TaperedHamiltonian::effective(const SeniorityConfig& bra,
                                                   const SeniorityConfig& ket) const {
  check_configs(bra, ket, n_orb_);
  PauliSum op(n_orb_);
  const auto it = buckets_.find(bra.bits ^ ket.bits);
  if (it != buckets_.end()) {
    for (const auto& t : it->second) {
      op.add(t.right, (std::popcount(ket.bits & t.z_left) & 1) ? -t.coeff : t.coeff);
    }
  }
  return {std::move(op), bra, ket};
}

TaperedState taper_check(const StateVector& full_state, const CliffordMap& uc) {
  const std::size_t nq = full_state.n_qubits();
  if (nq % 2 != 0 || uc.n_qubits() != nq) throw InputError("state and Clifford must act on 2 n_orb qubits");
  const std::size_t n = nq / 2;
  const StateVector mapped = apply_clifford(uc, full_state);
  const std::uint64_t lmask = low_mask(n);
  std::map<std::uint64_t, double> weight;
  for (std::uint64_t k = 0; k < mapped.dim(); ++k) {
    const double w = std::norm(mapped[k]);
    if (w > 0.0) weight[k & lmask] += w;
  }
  if (weight.empty()) throw InputError("zero state");
  std::uint64_t best = weight.begin()->first;
  double total = 0.0;
  for (const auto& [v, w] : weight) {
    total += w;
    if (w > weight[best]) best = v;
  }
  if (total - weight[best] > 1e-10 * total) throw InputError("not a seniority eigenstate");
  std::vector<Complex> amps(std::size_t{1} << n);
  for (std::uint64_t k = 0; k < amps.size(); ++k) amps[k] = mapped[best | (k << n)];
  return {SeniorityConfig(n, best), StateVector(n, std::move(amps))};
}

StateVector untaper(const SeniorityConfig& config, const StateVector& tapered, const CliffordMap& uc) {
  if (tapered.n_qubits() != config.n_orb || uc.n_qubits() != 2 * config.n_orb) {
    throw InputError("tapered state, config and Clifford disagree on n_orb");
  }
  return apply_clifford(uc.inverse(), tensor(StateVector::basis_state(config.n_orb, config.bits), tapered));
}

}  // namespace qsense
