#include "qsense/pauli.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qsense/error.hpp"

namespace qsense {

namespace {

void check_qubit(std::size_t q, std::size_t n) {
  if (q >= n) {
    throw InputError("qubit index " + std::to_string(q) + " out of range for " +
                     std::to_string(n) + " qubits");
  }
}

void check_same_size(std::size_t a, std::size_t b) {
  if (a != b) {
    throw InputError("Pauli operands act on " + std::to_string(a) + " and " +
                     std::to_string(b) + " qubits");
  }
}

Complex i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError("malformed number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// PauliKey

void PauliKey::set_x(std::size_t q, bool v) {
  const std::uint64_t bit = std::uint64_t{1} << (q & 63);
  if (v) {
    x[q >> 6] |= bit;
  } else {
    x[q >> 6] &= ~bit;
  }
}

void PauliKey::set_z(std::size_t q, bool v) {
  const std::uint64_t bit = std::uint64_t{1} << (q & 63);
  if (v) {
    z[q >> 6] |= bit;
  } else {
    z[q >> 6] &= ~bit;
  }
}

std::size_t PauliKey::weight() const {
  return std::popcount(x[0] | z[0]) + std::popcount(x[1] | z[1]);
}

std::size_t PauliKey::y_count() const {
  return std::popcount(x[0] & z[0]) + std::popcount(x[1] & z[1]);
}

// ---------------------------------------------------------------------------
// PauliProduct

PauliProduct::PauliProduct(std::size_t n_qubits) : n_(n_qubits) {
  if (n_qubits > kMaxQubits) {
    throw InputError("at most " + std::to_string(kMaxQubits) + " qubits are supported");
  }
}

PauliProduct::PauliProduct(std::size_t n_qubits, const PauliKey& key, int phase)
    : PauliProduct(n_qubits) {
  key_ = key;
  set_phase(phase);
  for (std::size_t w = 0; w < 2; ++w) {
    const std::size_t lo = w * 64;
    const std::uint64_t used = key.x[w] | key.z[w];
    if (used == 0) continue;
    if (n_qubits <= lo || (n_qubits - lo < 64 && (used >> (n_qubits - lo)) != 0)) {
      throw InputError("Pauli key has support outside " + std::to_string(n_qubits) + " qubits");
    }
  }
}

PauliProduct PauliProduct::from_ops(std::size_t n_qubits,
                                    std::initializer_list<std::pair<std::size_t, Pauli>> ops) {
  PauliProduct result(n_qubits);
  for (const auto& [q, p] : ops) {
    result = result * single(n_qubits, q, p);
  }
  return result;
}

PauliProduct PauliProduct::single(std::size_t n_qubits, std::size_t qubit, Pauli p) {
  PauliProduct result(n_qubits);
  result.set(qubit, p);
  return result;
}

Complex PauliProduct::phase_factor() const { return i_pow(phase_); }

Pauli PauliProduct::op(std::size_t q) const {
  check_qubit(q, n_);
  return static_cast<Pauli>(static_cast<int>(key_.get_x(q)) | (static_cast<int>(key_.get_z(q)) << 1));
}

void PauliProduct::set(std::size_t q, Pauli p) {
  check_qubit(q, n_);
  const auto bits = static_cast<std::uint8_t>(p);
  key_.set_x(q, bits & 1U);
  key_.set_z(q, bits & 2U);
}

PauliProduct PauliProduct::slice(std::size_t first, std::size_t count) const {
  if (first + count > n_) throw InputError("slice exceeds register");
  PauliProduct out(count);
  for (std::size_t q = 0; q < count; ++q) {
    out.key_.set_x(q, key_.get_x(first + q));
    out.key_.set_z(q, key_.get_z(first + q));
  }
  return out;
}

std::string PauliProduct::to_string() const {
  std::string out;
  for (std::size_t q = 0; q < n_; ++q) {
    const Pauli p = op(q);
    if (p == Pauli::I) continue;
    if (!out.empty()) out += ' ';
    out += (p == Pauli::X ? 'X' : p == Pauli::Y ? 'Y' : 'Z');
    out += std::to_string(q);
  }
  return out.empty() ? "I" : out;
}

int product_phase(const PauliKey& a, const PauliKey& b) {
  // Per-qubit mod-4 counters held bitwise in (cnt1, cnt2).
  std::uint64_t cnt1 = 0;
  std::uint64_t cnt2 = 0;
  for (std::size_t w = 0; w < 2; ++w) {
    const std::uint64_t x1 = a.x[w];
    const std::uint64_t z1 = a.z[w];
    const std::uint64_t x2 = b.x[w];
    const std::uint64_t z2 = b.z[w];
    const std::uint64_t new_x = x1 ^ x2;
    const std::uint64_t new_z = z1 ^ z2;
    const std::uint64_t x1z2 = x1 & z2;
    const std::uint64_t anti = (x2 & z1) ^ x1z2;
    cnt2 ^= (cnt1 ^ new_x ^ new_z ^ x1z2) & anti;
    cnt1 ^= anti;
  }
  return (std::popcount(cnt1) + 2 * std::popcount(cnt2)) & 3;
}

PauliProduct operator*(const PauliProduct& a, const PauliProduct& b) {
  check_same_size(a.n_qubits(), b.n_qubits());
  PauliKey key;
  for (std::size_t w = 0; w < 2; ++w) {
    key.x[w] = a.key().x[w] ^ b.key().x[w];
    key.z[w] = a.key().z[w] ^ b.key().z[w];
  }
  return PauliProduct(a.n_qubits(), key, a.phase() + b.phase() + product_phase(a.key(), b.key()));
}

bool commutes(const PauliKey& a, const PauliKey& b) {
  int parity = 0;
  for (std::size_t w = 0; w < 2; ++w) {
    parity ^= std::popcount((a.x[w] & b.z[w]) ^ (a.z[w] & b.x[w])) & 1;
  }
  return parity == 0;
}

bool commutes(const PauliProduct& a, const PauliProduct& b) {
  check_same_size(a.n_qubits(), b.n_qubits());
  return commutes(a.key(), b.key());
}

// ---------------------------------------------------------------------------
// PauliSum

PauliSum::PauliSum(std::size_t n_qubits, double drop_tolerance)
    : n_(n_qubits), tol_(drop_tolerance) {
  if (n_qubits > kMaxQubits) {
    throw InputError("at most " + std::to_string(kMaxQubits) + " qubits are supported");
  }
  if (drop_tolerance < 0.0) throw InputError("drop tolerance must be nonnegative");
}

PauliSum PauliSum::identity(std::size_t n_qubits, Complex c) {
  PauliSum s(n_qubits);
  s.add(PauliKey{}, c);
  return s;
}

PauliSum PauliSum::from_product(const PauliProduct& p, Complex c) {
  PauliSum s(p.n_qubits());
  s.add(p, c);
  return s;
}

void PauliSum::add(const PauliProduct& p, Complex c) {
  check_same_size(p.n_qubits(), n_);
  add(p.key(), c * p.phase_factor());
}

void PauliSum::add(const PauliKey& key, Complex c) {
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) < tol_ || (tol_ == 0.0 && it->second == Complex{})) terms_.erase(it);
}

Complex PauliSum::coefficient(const PauliKey& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? Complex{} : it->second;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  check_same_size(n_, other.n_);
  for (const auto& [k, c] : other.terms_) add(k, c);
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& other) {
  check_same_size(n_, other.n_);
  for (const auto& [k, c] : other.terms_) add(k, -c);
  return *this;
}

PauliSum& PauliSum::operator*=(Complex c) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= c;
    if (std::abs(it->second) < tol_) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
  return *this;
}

PauliSum PauliSum::adjoint() const {
  PauliSum out = *this;
  for (auto& [k, c] : out.terms_) c = std::conj(c);
  return out;
}

bool PauliSum::is_hermitian(double tol) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [tol](const auto& kv) { return std::abs(kv.second.imag()) <= tol; });
}

std::string PauliSum::to_string() const {
  std::string out;
  for (const auto& [k, c] : terms_) {
    out += format_term(k, c);
    out += '\n';
  }
  return out;
}

PauliSum PauliSum::parse(std::string_view text, std::size_t n_qubits) {
  PauliSum out(n_qubits);
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    line = trim(line);
    if (line.empty()) continue;
    try {
      auto [p, c] = parse_term(line, n_qubits);
      out.add(p, c);
    } catch (const InputError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return out;
}

PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  check_same_size(a.n_qubits(), b.n_qubits());
  PauliSum out(a.n_qubits(), std::min(a.drop_tolerance(), b.drop_tolerance()));
  for (const auto& [ka, ca] : a) {
    for (const auto& [kb, cb] : b) {
      PauliKey key;
      for (std::size_t w = 0; w < 2; ++w) {
        key.x[w] = ka.x[w] ^ kb.x[w];
        key.z[w] = ka.z[w] ^ kb.z[w];
      }
      out.add(key, ca * cb * i_pow(product_phase(ka, kb)));
    }
  }
  return out;
}

PauliSum operator*(PauliSum a, Complex c) { return a *= c; }
PauliSum operator*(Complex c, PauliSum a) { return a *= c; }

PauliSum commutator(const PauliSum& a, const PauliSum& b) { return a * b - b * a; }

double one_norm(const PauliSum& s, bool exclude_identity) {
  double total = 0.0;
  for (const auto& [k, c] : s) {
    if (exclude_identity && k.is_identity()) continue;
    total += std::abs(c);
  }
  return total;
}

PauliSum simplify(const PauliSum& s, double tol) {
  if (tol < 0.0) throw InputError("simplify tolerance must be nonnegative");
  PauliSum out(s.n_qubits(), tol);
  for (const auto& [k, c] : s) {
    if (std::abs(c) >= tol) out.add(k, c);
  }
  return out;
}

std::string format_term(const PauliKey& key, Complex c) {
  std::string coeff = c.imag() == 0.0
                          ? format_double(c.real())
                          : "(" + format_double(c.real()) + "," + format_double(c.imag()) + ")";
  std::string ops;
  for (std::size_t q = 0; q < kMaxQubits; ++q) {
    const bool x = key.get_x(q);
    const bool z = key.get_z(q);
    if (!x && !z) continue;
    if (!ops.empty()) ops += ' ';
    ops += x && z ? 'Y' : x ? 'X' : 'Z';
    ops += std::to_string(q);
  }
  return coeff + " * " + (ops.empty() ? "I" : ops);
}

std::pair<PauliProduct, Complex> parse_term(std::string_view text, std::size_t n_qubits) {
  const auto star = text.find('*');
  if (star == std::string_view::npos) throw InputError("expected 'c * PAULIS'");
  std::string_view coeff = trim(text.substr(0, star));
  std::string_view ops = trim(text.substr(star + 1));

  Complex c;
  if (!coeff.empty() && coeff.front() == '(') {
    if (coeff.back() != ')') throw InputError("unterminated complex coefficient");
    const auto inner = coeff.substr(1, coeff.size() - 2);
    const auto comma = inner.find(',');
    if (comma == std::string_view::npos) throw InputError("complex coefficient needs 're,im'");
    c = {parse_double(inner.substr(0, comma)), parse_double(inner.substr(comma + 1))};
  } else {
    c = parse_double(coeff);
  }

  PauliProduct p(n_qubits);
  std::istringstream in{std::string(ops)};
  std::string tok;
  while (in >> tok) {
    if (tok == "I") continue;
    const char letter = tok.front();
    Pauli op;
    switch (letter) {
      case 'X': op = Pauli::X; break;
      case 'Y': op = Pauli::Y; break;
      case 'Z': op = Pauli::Z; break;
      default: throw InputError("unknown Pauli '" + tok + "'");
    }
    std::size_t q = 0;
    auto [ptr, ec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), q);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.size() < 2) {
      throw InputError("malformed qubit index in '" + tok + "'");
    }
    check_qubit(q, n_qubits);
    if (p.op(q) != Pauli::I) throw InputError("qubit " + std::to_string(q) + " repeated");
    p.set(q, op);
  }
  return {p, c};
}

// ---------------------------------------------------------------------------
// CliffordMap

CliffordMap& CliffordMap::cnot(std::size_t control, std::size_t target) {
  check_qubit(control, n_);
  check_qubit(target, n_);
  if (control == target) throw InputError("CNOT control equals target");
  gates_.emplace_back(Cnot{control, target});
  return *this;
}

CliffordMap& CliffordMap::permute(std::vector<std::size_t> destination) {
  if (destination.size() != n_) throw InputError("permutation size mismatch");
  std::vector<bool> seen(n_, false);
  for (std::size_t d : destination) {
    check_qubit(d, n_);
    if (seen[d]) throw InputError("permutation is not a bijection");
    seen[d] = true;
  }
  gates_.emplace_back(QubitPermutation{std::move(destination)});
  return *this;
}

CliffordMap CliffordMap::inverse() const {
  CliffordMap inv(n_);
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
    if (const auto* g = std::get_if<Cnot>(&*it)) {
      inv.gates_.emplace_back(*g);
    } else {
      const auto& perm = std::get<QubitPermutation>(*it).destination;
      std::vector<std::size_t> back(n_);
      for (std::size_t q = 0; q < n_; ++q) back[perm[q]] = q;
      inv.gates_.emplace_back(QubitPermutation{std::move(back)});
    }
  }
  return inv;
}

PauliProduct conjugate(const PauliProduct& p, const CliffordMap& c) {
  check_same_size(p.n_qubits(), c.n_qubits());
  PauliKey key = p.key();
  int phase = p.phase();
  for (const auto& gate : c.gates()) {
    if (const auto* g = std::get_if<Cnot>(&gate)) {
      const bool xc = key.get_x(g->control);
      const bool zc = key.get_z(g->control);
      const bool xt = key.get_x(g->target);
      const bool zt = key.get_z(g->target);
      if (xc && zt && !(xt ^ zc)) phase += 2;
      key.set_x(g->target, xt ^ xc);
      key.set_z(g->control, zc ^ zt);
    } else {
      const auto& dest = std::get<QubitPermutation>(gate).destination;
      PauliKey moved;
      for (std::size_t q = 0; q < dest.size(); ++q) {
        moved.set_x(dest[q], key.get_x(q));
        moved.set_z(dest[q], key.get_z(q));
      }
      key = moved;
    }
  }
  return PauliProduct(p.n_qubits(), key, phase);
}

PauliSum conjugate(const PauliSum& s, const CliffordMap& c) {
  PauliSum out(s.n_qubits(), s.drop_tolerance());
  for (const auto& [k, coeff] : s) {
    out.add(conjugate(PauliProduct(s.n_qubits(), k), c), coeff);
  }
  return out;
}

}  // namespace qsense
