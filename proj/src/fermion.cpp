#include "qsense/fermion.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>

#include "qsense/error.hpp"

namespace qsense {

FermionIntegrals::FermionIntegrals(std::size_t n_orb_, std::size_t n_elec_)
    : n_orb(n_orb_),
      n_elec(n_elec_),
      h(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_orb_), static_cast<Eigen::Index>(n_orb_))),
      g(n_orb_ * n_orb_ * n_orb_ * n_orb_, 0.0) {
  if (2 * n_orb_ > 64) throw InputError("at most 32 spatial orbitals are supported");
}

void FermionIntegrals::validate(double tol) const {
  if (n_elec % 2 != 0) throw InputError("odd electron count; only closed-shell singlets are handled");
  if (n_elec > 2 * n_orb) throw InputError("more electrons than spin orbitals");
  if (static_cast<std::size_t>(h.rows()) != n_orb || static_cast<std::size_t>(h.cols()) != n_orb ||
      g.size() != n_orb * n_orb * n_orb * n_orb) {
    throw InputError("integral arrays do not match n_orb");
  }
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > tol) throw InputError("h is not symmetric");
  for (std::size_t p = 0; p < n_orb; ++p)
    for (std::size_t q = 0; q < n_orb; ++q)
      for (std::size_t r = 0; r < n_orb; ++r)
        for (std::size_t s = 0; s < n_orb; ++s) {
          const double v = eri(p, q, r, s);
          if (std::abs(v - eri(q, p, r, s)) > tol || std::abs(v - eri(p, q, s, r)) > tol ||
              std::abs(v - eri(r, s, p, q)) > tol) {
            throw InputError("two-electron integrals lack 8-fold symmetry");
          }
        }
}

// ---------------------------------------------------------------------------
// FCIDUMP

namespace {

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

std::optional<long> header_int(const std::string& header, const std::string& key) {
  const std::regex re("(^|[^A-Z0-9_])" + key + R"(\s*=\s*(-?\d+))");
  std::smatch m;
  if (!std::regex_search(header, m, re)) return std::nullopt;
  return std::stol(m[2].str());
}

double parse_value(std::string tok, std::size_t line) {
  std::replace(tok.begin(), tok.end(), 'D', 'E');
  std::replace(tok.begin(), tok.end(), 'd', 'e');
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') throw ParseError(line, "malformed value '" + tok + "'");
  return v;
}

long parse_index(const std::string& tok, std::size_t line) {
  char* end = nullptr;
  const long v = std::strtol(tok.c_str(), &end, 10);
  if (end == tok.c_str() || *end != '\0') throw ParseError(line, "malformed index '" + tok + "'");
  return v;
}

}  // namespace

FermionIntegrals parse_fcidump(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::string header;
  bool closed = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string u = upper(line);
    header += u + " ";
    if (u.find("&END") != std::string::npos || u.find('/') != std::string::npos) {
      closed = true;
      break;
    }
  }
  if (!closed) throw ParseError(line_no, "FCIDUMP header not terminated by &END");
  if (header.find("&FCI") == std::string::npos) throw ParseError(1, "missing &FCI namelist");
  const auto norb = header_int(header, "NORB");
  const auto nelec = header_int(header, "NELEC");
  const auto ms2 = header_int(header, "MS2");
  if (!norb || *norb <= 0) throw ParseError(line_no, "header lacks a positive NORB");
  if (!nelec || *nelec < 0) throw ParseError(line_no, "header lacks NELEC");
  if (*nelec % 2 != 0) throw ParseError(line_no, "odd NELEC; only closed-shell singlets are handled");
  if (ms2 && *ms2 != 0) throw ParseError(line_no, "MS2 must be 0");
  if (*nelec > 2 * *norb) throw ParseError(line_no, "NELEC exceeds 2*NORB");
  if (*norb > 32) throw ParseError(line_no, "at most 32 orbitals are supported");

  FermionIntegrals ints(static_cast<std::size_t>(*norb), static_cast<std::size_t>(*nelec));
  const long n = *norb;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() != 5) throw ParseError(line_no, "expected 'value p q r s'");
    const double v = parse_value(tok[0], line_no);
    long idx[4];
    for (int k = 0; k < 4; ++k) {
      idx[k] = parse_index(tok[1 + k], line_no);
      if (idx[k] < 0 || idx[k] > n) {
        throw ParseError(line_no, "orbital index " + std::to_string(idx[k]) + " outside 0.." +
                                      std::to_string(n));
      }
    }
    const auto [p, q, r, s] = std::tuple{idx[0], idx[1], idx[2], idx[3]};
    if (p == 0 && q == 0 && r == 0 && s == 0) {
      ints.e_core = v;
    } else if (p > 0 && q > 0 && r == 0 && s == 0) {
      ints.h(p - 1, q - 1) = v;
      ints.h(q - 1, p - 1) = v;
    } else if (p > 0 && q == 0 && r == 0 && s == 0) {
      // orbital energy record; recomputed from the integrals instead
    } else if (p > 0 && q > 0 && r > 0 && s > 0) {
      const std::size_t a = p - 1, b = q - 1, c = r - 1, d = s - 1;
      for (auto [w, x, y, z] : {std::tuple{a, b, c, d}, std::tuple{b, a, c, d}, std::tuple{a, b, d, c},
                                std::tuple{b, a, d, c}, std::tuple{c, d, a, b}, std::tuple{d, c, a, b},
                                std::tuple{c, d, b, a}, std::tuple{d, c, b, a}}) {
        ints.eri(w, x, y, z) = v;
      }
    } else {
      throw ParseError(line_no, "unsupported index pattern");
    }
  }
  return ints;
}

FermionIntegrals read_fcidump(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open FCIDUMP file '" + path + "'");
  return parse_fcidump(f);
}

void write_fcidump(std::ostream& out, const FermionIntegrals& ints, double tol) {
  const std::size_t n = ints.n_orb;
  out << " &FCI NORB=" << n << ",NELEC=" << ints.n_elec << ",MS2=0,\n  ORBSYM=";
  for (std::size_t i = 0; i < n; ++i) out << "1,";
  out << "\n  ISYM=1,\n &END\n";
  out << std::setprecision(17) << std::scientific;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s <= r; ++s) {
          if (p * (p + 1) / 2 + q < r * (r + 1) / 2 + s) continue;
          const double v = ints.eri(p, q, r, s);
          if (std::abs(v) > tol) {
            out << ' ' << v << ' ' << p + 1 << ' ' << q + 1 << ' ' << r + 1 << ' ' << s + 1 << '\n';
          }
        }
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q) {
      const double v = ints.h(p, q);
      if (std::abs(v) > tol) out << ' ' << v << ' ' << p + 1 << ' ' << q + 1 << " 0 0\n";
    }
  out << ' ' << ints.e_core << " 0 0 0 0\n";
}

// ---------------------------------------------------------------------------
// Jordan-Wigner

namespace {

struct LadderImage {
  PauliProduct p[2];
  Complex c[2];
};

LadderImage ladder_image(std::size_t n_qubits, const Ladder& op) {
  if (op.mode >= n_qubits) throw InputError("ladder mode out of range");
  PauliProduct xs(n_qubits);
  for (std::size_t k = 0; k < op.mode; ++k) xs.set(k, Pauli::Z);
  PauliProduct ys = xs;
  xs.set(op.mode, Pauli::X);
  ys.set(op.mode, Pauli::Y);
  // a+ = Z..(X - iY)/2, a = Z..(X + iY)/2
  return {{xs, ys}, {0.5, Complex(0.0, op.creation ? -0.5 : 0.5)}};
}

void accumulate_product(PauliSum& out, const std::vector<LadderImage>& imgs, Complex coeff) {
  const std::size_t m = imgs.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    PauliProduct p(out.n_qubits());
    Complex c = coeff;
    for (std::size_t k = 0; k < m; ++k) {
      const int b = (mask >> k) & 1;
      p = p * imgs[k].p[b];
      c *= imgs[k].c[b];
    }
    out.add(p, c);
  }
}

}  // namespace

PauliSum jw_product(std::size_t n_qubits, const std::vector<Ladder>& ops) {
  std::vector<LadderImage> imgs;
  for (const auto& op : ops) imgs.push_back(ladder_image(n_qubits, op));
  PauliSum out(n_qubits, 0.0);
  accumulate_product(out, imgs, 1.0);
  return simplify(out, kDefaultDropTolerance);
}

PauliSum jordan_wigner(const FermionIntegrals& ints) {
  const std::size_t n = ints.n_orb;
  const std::size_t nq = 2 * n;
  constexpr double kSkip = 1e-14;
  std::vector<LadderImage> create(nq), annihilate(nq);
  for (std::size_t j = 0; j < nq; ++j) {
    create[j] = ladder_image(nq, {j, true});
    annihilate[j] = ladder_image(nq, {j, false});
  }
  PauliSum out(nq, 0.0);
  out.add(PauliKey{}, ints.e_core);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      const double v = ints.h(p, q);
      if (std::abs(v) < kSkip) continue;
      for (int sg = 0; sg < 2; ++sg) {
        accumulate_product(out, {create[spin_orbital(p, sg)], annihilate[spin_orbital(q, sg)]}, v);
      }
    }
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          const double v = ints.eri(p, q, r, s);
          if (std::abs(v) < kSkip) continue;
          for (int sg = 0; sg < 2; ++sg)
            for (int tau = 0; tau < 2; ++tau) {
              if (sg == tau && (p == r || q == s)) continue;
              accumulate_product(out,
                                 {create[spin_orbital(p, sg)], create[spin_orbital(r, tau)],
                                  annihilate[spin_orbital(s, tau)], annihilate[spin_orbital(q, sg)]},
                                 0.5 * v);
            }
        }
  PauliSum h = simplify(out, kDefaultDropTolerance);
  // Exact arithmetic gives real coefficients; strip rounding residue.
  PauliSum real(nq);
  for (const auto& [k, c] : h) {
    if (std::abs(c.imag()) > 1e-10) throw ContractViolation("non-real Jordan-Wigner coefficient");
    real.add(k, c.real());
  }
  return real;
}

PauliSum number_operator(std::size_t n_orb) {
  PauliSum out(2 * n_orb);
  for (std::size_t j = 0; j < 2 * n_orb; ++j) out += jw_product(2 * n_orb, {{j, true}, {j, false}});
  return out;
}

PauliSum sz_operator(std::size_t n_orb) {
  PauliSum out(2 * n_orb);
  for (std::size_t i = 0; i < n_orb; ++i) {
    out += 0.5 * jw_product(2 * n_orb, {{spin_orbital(i, false), true}, {spin_orbital(i, false), false}});
    out -= 0.5 * jw_product(2 * n_orb, {{spin_orbital(i, true), true}, {spin_orbital(i, true), false}});
  }
  return out;
}

PauliSum s2_operator(std::size_t n_orb) {
  const std::size_t nq = 2 * n_orb;
  PauliSum sp(nq), sm(nq);
  for (std::size_t i = 0; i < n_orb; ++i) {
    sp += jw_product(nq, {{spin_orbital(i, false), true}, {spin_orbital(i, true), false}});
    sm += jw_product(nq, {{spin_orbital(i, true), true}, {spin_orbital(i, false), false}});
  }
  const PauliSum sz = sz_operator(n_orb);
  return simplify(sm * sp + sz * sz + sz, kDefaultDropTolerance);
}

// ---------------------------------------------------------------------------
// Orbital rotations

OrbitalRotation::OrbitalRotation(std::size_t n_orb)
    : t_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_orb), static_cast<Eigen::Index>(n_orb))) {}

OrbitalRotation::OrbitalRotation(Eigen::MatrixXd t) : t_(std::move(t)) {
  if (t_.rows() != t_.cols()) throw InputError("rotation generator must be square");
  for (Eigen::Index p = 0; p < t_.rows(); ++p)
    for (Eigen::Index q = 0; q < t_.cols(); ++q)
      if (t_(p, q) != -t_(q, p)) throw InputError("rotation generator must be antisymmetric");
}

void OrbitalRotation::set(std::size_t p, std::size_t q, double value) {
  if (p == q) throw InputError("diagonal rotation amplitudes must vanish");
  t_(p, q) = value;
  t_(q, p) = -value;
}

Eigen::MatrixXd OrbitalRotation::unitary() const { return t_.exp(); }

FermionIntegrals rotate_orbitals(const FermionIntegrals& ints, const Eigen::MatrixXd& u) {
  const std::size_t n = ints.n_orb;
  if (static_cast<std::size_t>(u.rows()) != n || u.rows() != u.cols()) {
    throw InputError("rotation dimension does not match integrals");
  }
  FermionIntegrals out(n, ints.n_elec);
  out.e_core = ints.e_core;
  out.h = u.transpose() * ints.h * u;
  // Four quarter transforms, one index at a time.
  std::vector<double> a = ints.g, b(a.size());
  const auto at = [n](std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    return ((p * n + q) * n + r) * n + s;
  };
  for (int slot = 0; slot < 4; ++slot) {
    std::fill(b.begin(), b.end(), 0.0);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t s = 0; s < n; ++s) {
            const double v = a[at(p, q, r, s)];
            if (v == 0.0) continue;
            for (std::size_t k = 0; k < n; ++k) {
              switch (slot) {
                case 0: b[at(k, q, r, s)] += u(p, k) * v; break;
                case 1: b[at(p, k, r, s)] += u(q, k) * v; break;
                case 2: b[at(p, q, k, s)] += u(r, k) * v; break;
                default: b[at(p, q, r, k)] += u(s, k) * v; break;
              }
            }
          }
    a.swap(b);
  }
  out.g = std::move(a);
  return out;
}

FermionIntegrals rotate_orbitals(const FermionIntegrals& ints, const OrbitalRotation& rot) {
  return rotate_orbitals(ints, rot.unitary());
}

double hf_energy(const FermionIntegrals& ints) {
  const std::size_t nocc = ints.n_occ();
  double e = ints.e_core;
  for (std::size_t i = 0; i < nocc; ++i) {
    e += 2.0 * ints.h(i, i);
    for (std::size_t j = 0; j < nocc; ++j) e += 2.0 * ints.eri(i, i, j, j) - ints.eri(i, j, j, i);
  }
  return e;
}

std::vector<double> orbital_energies(const FermionIntegrals& ints) {
  std::vector<double> eps(ints.n_orb);
  for (std::size_t p = 0; p < ints.n_orb; ++p) {
    double e = ints.h(p, p);
    for (std::size_t i = 0; i < ints.n_occ(); ++i) e += 2.0 * ints.eri(p, p, i, i) - ints.eri(p, i, i, p);
    eps[p] = e;
  }
  return eps;
}

std::optional<double> mp2_pair_amplitude(const FermionIntegrals& ints, std::size_t i, std::size_t a) {
  if (i >= ints.n_occ() || a < ints.n_occ() || a >= ints.n_orb) {
    throw InputError("mp2 pair amplitude needs an occupied i and a virtual a");
  }
  const auto eps = orbital_energies(ints);
  const double denom = 2.0 * (eps[i] - eps[a]);
  if (std::abs(eps[a] - eps[i]) < 1e-8) {
    spdlog::warn("degenerate MP2 denominator for pair {}->{}; amplitude set by caller", i, a);
    return std::nullopt;
  }
  return ints.eri(a, i, a, i) / denom;
}

}  // namespace qsense
