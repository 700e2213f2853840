#include "qsense/csf.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "qsense/error.hpp"

namespace qsense {

std::string to_string(CsfKind kind) {
  switch (kind) {
    case CsfKind::HF: return "hf";
    case CsfKind::SingleSinglet: return "single";
    case CsfKind::DoubleSinglet: return "double";
    case CsfKind::TripletPair: return "triplet_pair";
  }
  return "?";
}

CsfKind csf_kind_from_string(const std::string& s) {
  if (s == "hf") return CsfKind::HF;
  if (s == "single") return CsfKind::SingleSinglet;
  if (s == "double") return CsfKind::DoubleSinglet;
  if (s == "triplet_pair") return CsfKind::TripletPair;
  throw InputError("unknown CSF kind '" + s + "'");
}

CsfSpec CsfSpec::hf() { return {}; }

CsfSpec CsfSpec::single(std::size_t i, std::size_t a) {
  CsfSpec s;
  s.kind = CsfKind::SingleSinglet;
  s.i = i;
  s.a = a;
  return s;
}

CsfSpec CsfSpec::double_singlet(std::size_t i, std::size_t j, std::size_t a, std::size_t b) {
  CsfSpec s;
  s.kind = CsfKind::DoubleSinglet;
  s.i = i, s.j = j, s.a = a, s.b = b;
  return s;
}

CsfSpec CsfSpec::triplet_pair(std::size_t i, std::size_t j, std::size_t a, std::size_t b) {
  CsfSpec s = double_singlet(i, j, a, b);
  s.kind = CsfKind::TripletPair;
  return s;
}

std::vector<std::size_t> CsfSpec::unpaired() const {
  std::vector<std::size_t> u;
  switch (kind) {
    case CsfKind::HF: break;
    case CsfKind::SingleSinglet: u = {i, a}; break;
    default:
      // A repeated hole empties its orbital and a repeated particle fills it.
      if (i != j) u.insert(u.end(), {i, j});
      if (a != b) u.insert(u.end(), {a, b});
      break;
  }
  std::sort(u.begin(), u.end());
  return u;
}

std::vector<std::size_t> CsfSpec::reference_pairs(std::size_t n_occ) const {
  std::set<std::size_t> occ;
  for (std::size_t p = 0; p < n_occ; ++p) occ.insert(p);
  for (const auto& m : pair_moves) {
    occ.erase(m.source);
    occ.insert(m.target);
  }
  return {occ.begin(), occ.end()};
}

std::vector<std::size_t> CsfSpec::paired(std::size_t n_occ) const {
  std::map<std::size_t, int> count;
  for (std::size_t p : reference_pairs(n_occ)) count[p] = 2;
  if (kind != CsfKind::HF) {
    --count[i];
    ++count[a];
  }
  if (kind == CsfKind::DoubleSinglet || kind == CsfKind::TripletPair) {
    --count[j];
    ++count[b];
  }
  std::vector<std::size_t> out;
  for (const auto& [p, c] : count)
    if (c == 2) out.push_back(p);
  return out;
}

std::string CsfSpec::to_string() const {
  std::ostringstream s;
  switch (kind) {
    case CsfKind::HF: s << "HF"; break;
    case CsfKind::SingleSinglet: s << "S(" << i << "->" << a << ")"; break;
    case CsfKind::DoubleSinglet: s << "D(" << i << "," << j << "->" << a << "," << b << ")"; break;
    case CsfKind::TripletPair: s << "T(" << i << "," << j << "->" << a << "," << b << ")"; break;
  }
  if (!pair_moves.empty()) {
    s << "[";
    for (std::size_t k = 0; k < pair_moves.size(); ++k)
      s << (k ? "," : "") << pair_moves[k].target << "<-" << pair_moves[k].source;
    s << "]";
  }
  return s.str();
}

// ---------------------------------------------------------------------------
// Validation

void validate(const CsfSpec& spec, std::size_t n_orb, std::size_t n_elec) {
  if (n_elec % 2 != 0 || n_elec > 2 * n_orb) throw InputError("invalid electron count");
  const std::size_t n_occ = n_elec / 2;
  std::set<std::size_t> occ;
  for (std::size_t p = 0; p < n_occ; ++p) occ.insert(p);
  std::vector<std::size_t> touched;
  if (spec.kind != CsfKind::HF) touched = {spec.i, spec.a};
  if (spec.kind == CsfKind::DoubleSinglet || spec.kind == CsfKind::TripletPair) {
    touched.push_back(spec.j);
    touched.push_back(spec.b);
  }
  for (const auto& m : spec.pair_moves) {
    if (m.source >= n_orb || m.target >= n_orb) throw InputError("pair move orbital out of range");
    if (!occ.count(m.source) || occ.count(m.target)) {
      throw InputError("pair move " + std::to_string(m.target) + "<-" + std::to_string(m.source) +
                       " needs a paired source and an empty target");
    }
    if (std::find(touched.begin(), touched.end(), m.source) != touched.end() ||
        std::find(touched.begin(), touched.end(), m.target) != touched.end()) {
      throw InputError("pair move touches an excitation orbital");
    }
    occ.erase(m.source);
    occ.insert(m.target);
  }
  if (spec.kind == CsfKind::HF) return;
  std::vector<std::size_t> holes{spec.i}, parts{spec.a};
  if (spec.kind != CsfKind::SingleSinglet) {
    holes.push_back(spec.j);
    parts.push_back(spec.b);
  }
  for (std::size_t p : holes)
    if (p >= n_orb || !occ.count(p)) throw InputError("excitation source " + std::to_string(p) + " not occupied");
  for (std::size_t p : parts)
    if (p >= n_orb || occ.count(p)) throw InputError("excitation target " + std::to_string(p) + " not empty");
  // DoubleSinglet may repeat its hole or its particle, not both; the
  // triplet-coupled combination vanishes for any repeat.
  const bool repeat_i = spec.kind != CsfKind::SingleSinglet && spec.i == spec.j;
  const bool repeat_a = spec.kind != CsfKind::SingleSinglet && spec.a == spec.b;
  if ((repeat_i && repeat_a) || ((repeat_i || repeat_a) && spec.kind == CsfKind::TripletPair)) {
    throw InputError("CSF orbital indices collide: " + spec.to_string());
  }
}

void validate(const BasisState& state, std::size_t n_orb, std::size_t n_elec) {
  validate(state.csf, n_orb, n_elec);
  const auto u = state.csf.unpaired();
  for (const auto& r : state.rotations) {
    if (r.target >= n_orb || r.source >= n_orb || r.target == r.source) {
      throw InputError("pair rotation orbitals invalid");
    }
    if (std::find(u.begin(), u.end(), r.target) != u.end() || std::find(u.begin(), u.end(), r.source) != u.end()) {
      throw InputError("pair rotation touches an unpaired orbital of " + state.csf.to_string());
    }
    if (!std::isfinite(r.theta)) throw InputError("non-finite rotation angle");
  }
}

// ---------------------------------------------------------------------------
// Determinant expansions

namespace {

struct Op {
  std::size_t mode;
  bool creation;
};

/// c * (ops applied right to left)
struct OpString {
  double coeff;
  std::vector<Op> ops;
};

DeterminantExpansion apply_ops(const DeterminantExpansion& in, const std::vector<OpString>& terms) {
  DeterminantExpansion out;
  for (const auto& [det0, amp0] : in) {
    for (const auto& t : terms) {
      std::uint64_t det = det0;
      double amp = amp0 * t.coeff;
      bool alive = true;
      for (auto it = t.ops.rbegin(); it != t.ops.rend() && alive; ++it) {
        const std::uint64_t bit = std::uint64_t{1} << it->mode;
        if (((det & bit) != 0) == it->creation) {
          alive = false;
          break;
        }
        if (std::popcount(det & (bit - 1)) & 1) amp = -amp;
        det ^= bit;
      }
      if (alive) out[det] += amp;
    }
  }
  std::erase_if(out, [](const auto& kv) { return std::abs(kv.second) < 1e-14; });
  return out;
}

std::size_t up(std::size_t p) { return 2 * p; }
std::size_t dn(std::size_t p) { return 2 * p + 1; }

// Spin-adapted excitations i -> a.
std::vector<OpString> e00(std::size_t i, std::size_t a) {
  const double r = 1.0 / std::sqrt(2.0);
  return {{r, {{dn(a), true}, {dn(i), false}}}, {r, {{up(a), true}, {up(i), false}}}};
}
std::vector<OpString> e10(std::size_t i, std::size_t a) {
  const double r = 1.0 / std::sqrt(2.0);
  return {{r, {{dn(a), true}, {dn(i), false}}}, {-r, {{up(a), true}, {up(i), false}}}};
}
// Standard-phase rank-1 component; the bare a+_{a up} a_{i down} does not
// couple to a singlet in the combination below.
std::vector<OpString> e11(std::size_t i, std::size_t a) { return {{-1.0, {{up(a), true}, {dn(i), false}}}}; }
std::vector<OpString> e1m1(std::size_t i, std::size_t a) { return {{1.0, {{dn(a), true}, {up(i), false}}}}; }

DeterminantExpansion add(DeterminantExpansion a, const DeterminantExpansion& b, double cb) {
  for (const auto& [d, v] : b) a[d] += cb * v;
  std::erase_if(a, [](const auto& kv) { return std::abs(kv.second) < 1e-14; });
  return a;
}

}  // namespace

DeterminantExpansion csf_determinants(const CsfSpec& spec, std::size_t n_orb, std::size_t n_elec) {
  validate(spec, n_orb, n_elec);
  std::uint64_t ref = 0;
  for (std::size_t p : spec.reference_pairs(n_elec / 2)) ref |= (std::uint64_t{3} << (2 * p));
  DeterminantExpansion hf{{ref, 1.0}};
  DeterminantExpansion out;
  switch (spec.kind) {
    case CsfKind::HF: out = hf; break;
    case CsfKind::SingleSinglet: out = apply_ops(hf, e00(spec.i, spec.a)); break;
    case CsfKind::DoubleSinglet: out = apply_ops(apply_ops(hf, e00(spec.i, spec.a)), e00(spec.j, spec.b)); break;
    case CsfKind::TripletPair: {
      const auto t1 = apply_ops(apply_ops(hf, e1m1(spec.i, spec.a)), e11(spec.j, spec.b));
      const auto t2 = apply_ops(apply_ops(hf, e10(spec.i, spec.a)), e10(spec.j, spec.b));
      const auto t3 = apply_ops(apply_ops(hf, e11(spec.i, spec.a)), e1m1(spec.j, spec.b));
      out = add(add(add({}, t1, -1.0), t2, 1.0), t3, -1.0);
      break;
    }
  }
  double nrm = 0.0;
  for (const auto& [d, v] : out) nrm += v * v;
  if (nrm < 1e-20) throw InputError("CSF " + spec.to_string() + " vanishes");
  nrm = std::sqrt(nrm);
  for (auto& [d, v] : out) v /= nrm;
  return out;
}

StateVector make_csf_full(const CsfSpec& spec, std::size_t n_orb, std::size_t n_elec) {
  const auto dets = csf_determinants(spec, n_orb, n_elec);
  std::vector<Complex> amps(std::size_t{1} << (2 * n_orb));
  for (const auto& [d, v] : dets) amps[d] = v;
  return StateVector(2 * n_orb, std::move(amps));
}

StateVector make_csf_tapered(const CsfSpec& spec, std::size_t n_orb, std::size_t n_elec) {
  const auto dets = csf_determinants(spec, n_orb, n_elec);
  const SeniorityConfig v = seniority_config(spec, n_orb);
  std::vector<Complex> amps(std::size_t{1} << n_orb);
  for (const auto& [d, val] : dets) {
    std::uint64_t seniority = 0, down = 0;
    for (std::size_t p = 0; p < n_orb; ++p) {
      const std::uint64_t nu = (d >> (2 * p)) & 1U, nd = (d >> (2 * p + 1)) & 1U;
      seniority |= (nu ^ nd) << p;
      down |= nd << p;
    }
    if (seniority != v.bits) throw ContractViolation("CSF determinant outside its seniority sector");
    amps[down] += val;
  }
  return StateVector(n_orb, std::move(amps));
}

SeniorityConfig seniority_config(const CsfSpec& spec, std::size_t n_orb) {
  std::uint64_t bits = 0;
  for (std::size_t p : spec.unpaired()) {
    if (p >= n_orb) throw InputError("orbital index out of range");
    bits |= std::uint64_t{1} << p;
  }
  return SeniorityConfig(n_orb, bits);
}

SeniorityConfig seniority_config(const BasisState& state, std::size_t n_orb) {
  return seniority_config(state.csf, n_orb);
}

void apply_pair_rotation(StateVector& psi, std::size_t target, std::size_t source, double theta) {
  if (target == source || target >= psi.n_qubits() || source >= psi.n_qubits()) {
    throw InputError("pair rotation qubits invalid");
  }
  const std::uint64_t tm = std::uint64_t{1} << target, sm = std::uint64_t{1} << source;
  const double c = std::cos(theta), s = std::sin(theta);
  for (std::uint64_t k = 0; k < psi.dim(); ++k) {
    if ((k & tm) || !(k & sm)) continue;
    const std::uint64_t kp = k ^ tm ^ sm;
    const Complex a = psi[k], b = psi[kp];
    psi[k] = c * a - s * b;
    psi[kp] = s * a + c * b;
  }
}

StateVector apply_pair_rotation(const StateVector& psi, std::size_t target, std::size_t source, double theta) {
  StateVector out = psi;
  apply_pair_rotation(out, target, source, theta);
  return out;
}

StateVector prepare_tapered(const BasisState& state, std::size_t n_orb, std::size_t n_elec) {
  validate(state, n_orb, n_elec);
  StateVector psi = make_csf_tapered(state.csf, n_orb, n_elec);
  for (const auto& r : state.rotations) apply_pair_rotation(psi, r.target, r.source, r.theta);
  return psi;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string join_indices(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  for (std::size_t pos; (pos = s.find(sep, start)) != std::string::npos; start = pos + 1) {
    out.push_back(s.substr(start, pos - start));
  }
  out.push_back(s.substr(start));
  return out;
}

std::size_t to_index(const std::string& s, std::size_t line) {
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw ParseError(line, "bad index '" + s + "'");
  return v;
}

double to_real(const std::string& s, std::size_t line) {
  double v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw ParseError(line, "bad number '" + s + "'");
  return v;
}

std::pair<std::size_t, std::size_t> arrow(const std::string& s, std::size_t line) {
  const auto pos = s.find("<-");
  if (pos == std::string::npos) throw ParseError(line, "expected 'target<-source' in '" + s + "'");
  return {to_index(s.substr(0, pos), line), to_index(s.substr(pos + 2), line)};
}

}  // namespace

void write_basis(std::ostream& out, const std::vector<BasisState>& basis, std::size_t n_orb, std::size_t n_elec) {
  out << "qsense-basis 1\n";
  out << "n_orb " << n_orb << "\n";
  out << "n_elec " << n_elec << "\n";
  for (const auto& st : basis) {
    const auto& c = st.csf;
    std::vector<std::size_t> idx;
    switch (c.kind) {
      case CsfKind::HF: break;
      case CsfKind::SingleSinglet: idx = {c.i, c.a}; break;
      default: idx = {c.i, c.j, c.a, c.b}; break;
    }
    out << "state label=" << (st.label.empty() ? "-" : st.label) << " kind=" << to_string(c.kind)
        << " orbitals=" << join_indices(idx) << " moves=";
    for (std::size_t k = 0; k < c.pair_moves.size(); ++k) {
      out << (k ? "," : "") << c.pair_moves[k].target << "<-" << c.pair_moves[k].source;
    }
    out << " rotations=";
    for (std::size_t k = 0; k < st.rotations.size(); ++k) {
      char buf[64];
      const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, st.rotations[k].theta);
      out << (k ? "," : "") << st.rotations[k].target << "<-" << st.rotations[k].source << ":"
          << std::string(buf, end);
    }
    out << "\n";
  }
}

BasisFile parse_basis(std::istream& in) {
  BasisFile f;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head) || head[0] == '#') continue;
    if (head == "qsense-basis") {
      header = true;
    } else if (head == "n_orb") {
      ls >> f.n_orb;
    } else if (head == "n_elec") {
      ls >> f.n_elec;
    } else if (head == "state") {
      if (!header) throw ParseError(line_no, "missing qsense-basis header");
      BasisState st;
      std::vector<std::size_t> idx;
      for (std::string tok; ls >> tok;) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected key=value, got '" + tok + "'");
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "label") {
          st.label = val == "-" ? "" : val;
        } else if (key == "kind") {
          try {
            st.csf.kind = csf_kind_from_string(val);
          } catch (const InputError& e) {
            throw ParseError(line_no, e.what());
          }
        } else if (key == "orbitals") {
          for (const auto& s : split(val, ',')) idx.push_back(to_index(s, line_no));
        } else if (key == "moves") {
          for (const auto& s : split(val, ',')) {
            const auto [t, src] = arrow(s, line_no);
            st.csf.pair_moves.push_back({t, src});
          }
        } else if (key == "rotations") {
          for (const auto& s : split(val, ',')) {
            const auto colon = s.find(':');
            if (colon == std::string::npos) throw ParseError(line_no, "rotation needs ':theta'");
            const auto [t, src] = arrow(s.substr(0, colon), line_no);
            st.rotations.push_back({t, src, to_real(s.substr(colon + 1), line_no)});
          }
        } else {
          throw ParseError(line_no, "unknown key '" + key + "'");
        }
      }
      const std::size_t want = st.csf.kind == CsfKind::HF ? 0 : st.csf.kind == CsfKind::SingleSinglet ? 2 : 4;
      if (idx.size() != want) throw ParseError(line_no, "wrong orbital count for " + to_string(st.csf.kind));
      if (want == 2) st.csf.i = idx[0], st.csf.a = idx[1];
      if (want == 4) st.csf.i = idx[0], st.csf.j = idx[1], st.csf.a = idx[2], st.csf.b = idx[3];
      try {
        validate(st, f.n_orb, f.n_elec);
      } catch (const InputError& e) {
        throw ParseError(line_no, e.what());
      }
      f.states.push_back(std::move(st));
    } else {
      throw ParseError(line_no, "unknown record '" + head + "'");
    }
  }
  if (!header) throw ParseError(line_no, "missing qsense-basis header");
  return f;
}

}  // namespace qsense
