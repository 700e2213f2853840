#include "qsense/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qsense/error.hpp"

namespace qsense {

SwapTestOperator build_swap_operator(const EffectiveHamiltonian& x) {
  const std::size_t n = x.op.n_qubits();
  SwapTestOperator s{PauliSum(n + 1), 0.0, false};
  for (const auto& [key, c] : x.op) {
    if (c.real() != 0.0) {
      PauliProduct p(n + 1, key);
      p.set(n, Pauli::X);
      s.op.add(p, c.real());
    }
    if (c.imag() != 0.0) {
      PauliProduct p(n + 1, key);
      p.set(n, Pauli::Y);
      s.op.add(p, -c.imag());
    }
    if (key.is_identity()) s.c_x = c.real();
  }
  return s;
}

SwapTestOperator shift_constant(SwapTestOperator s, double h_mm, double h_nn) {
  const std::size_t n = s.op.n_qubits() - 1;
  const PauliKey xa = PauliProduct::single(n + 1, n, Pauli::X).key();
  const double shifted = s.c_x - 0.5 * (h_mm + h_nn);
  s.op.erase(xa);
  s.op.add(xa, shifted);
  s.c_x = shifted;
  s.shifted = true;
  return s;
}

PauliSum FragmentSet::sum() const {
  PauliSum out(fragments.empty() ? 0 : fragments.front().n_qubits());
  for (const auto& f : fragments) out += f;
  return out;
}

FragmentSet sorted_insertion(const PauliSum& op) {
  std::vector<std::pair<PauliKey, Complex>> terms(op.begin(), op.end());
  // std::map order is the key order, so a stable sort breaks ties by key.
  std::stable_sort(terms.begin(), terms.end(),
                   [](const auto& a, const auto& b) { return std::abs(a.second) > std::abs(b.second); });
  FragmentSet out;
  out.source_terms = op.size();
  std::vector<std::vector<PauliKey>> members;
  for (const auto& [key, c] : terms) {
    if (key.is_identity()) {
      if (out.fragments.empty()) {
        out.fragments.emplace_back(op.n_qubits(), op.drop_tolerance());
        members.emplace_back();
      }
      out.fragments.front().add(key, c);
      continue;
    }
    std::size_t slot = out.fragments.size();
    for (std::size_t f = 0; f < members.size(); ++f) {
      const bool ok = std::all_of(members[f].begin(), members[f].end(),
                                  [&](const PauliKey& m) { return commutes(m, key); });
      if (ok) {
        slot = f;
        break;
      }
    }
    if (slot == out.fragments.size()) {
      out.fragments.emplace_back(op.n_qubits(), op.drop_tolerance());
      members.emplace_back();
    }
    out.fragments[slot].add(key, c);
    members[slot].push_back(key);
  }
  return out;
}

bool verify_fragments(const FragmentSet& f, const PauliSum& op) {
  std::size_t count = 0;
  for (const auto& frag : f.fragments) {
    count += frag.size();
    for (auto a = frag.begin(); a != frag.end(); ++a)
      for (auto b = std::next(a); b != frag.end(); ++b)
        if (!commutes(a->first, b->first)) return false;
  }
  if (count != op.size()) return false;
  for (const auto& [key, c] : op) {
    std::size_t hits = 0;
    for (const auto& frag : f.fragments) {
      const auto it = frag.terms().find(key);
      if (it == frag.terms().end()) continue;
      ++hits;
      if (it->second != c) return false;
    }
    if (hits != 1) return false;
  }
  return true;
}

double fragment_variance(const StateVector& psi, const PauliSum& fragment) {
  const StateVector fpsi = apply(fragment, psi);
  const double second = inner(fpsi, fpsi).real();
  const double first = inner(psi, fpsi).real();
  return std::max(0.0, second - first * first);
}

std::vector<double> fragment_proportions(const ElementVariance& v) {
  std::vector<double> p(v.fragment_sigma.size(), 0.0);
  if (v.sigma <= 0.0) return p;
  for (std::size_t a = 0; a < p.size(); ++a) p[a] = v.fragment_sigma[a] / v.sigma;
  return p;
}

ElementVariance element_variance(const StateVector& psi, const FragmentSet& f) {
  ElementVariance out;
  for (const auto& frag : f.fragments) {
    const double s = std::sqrt(fragment_variance(psi, frag));
    out.fragment_sigma.push_back(s);
    out.sigma += s;
  }
  return out;
}

ElementMeasurement plan_diagonal(const EffectiveHamiltonian& x, const StateVector& phi) {
  if (x.bra != x.ket) throw InputError("diagonal measurement needs equal seniority configs");
  ElementMeasurement m{x.op, phi, sorted_insertion(x.op), false};
  return m;
}

ElementMeasurement plan_off_diagonal(const EffectiveHamiltonian& x, const StateVector& bra,
                                     const StateVector& ket, bool shift, double h_mm, double h_nn) {
  SwapTestOperator s = build_swap_operator(x);
  if (shift) s = shift_constant(std::move(s), h_mm, h_nn);
  ElementMeasurement m{s.op, prepare_swap_state(bra, ket), sorted_insertion(s.op), true};
  return m;
}

namespace {

void check_cost_inputs(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& c0) {
  if (sigma.rows() != sigma.cols() || sigma.rows() != c0.size()) {
    throw InputError("sigma must be square and match c0");
  }
  if (std::abs(c0.norm() - 1.0) > 1e-8) throw InputError("c0 must be normalized");
  for (Eigen::Index i = 0; i < sigma.rows(); ++i)
    for (Eigen::Index j = 0; j < sigma.cols(); ++j) {
      if (sigma(i, j) < 0.0) throw InputError("sigma entries must be nonnegative");
      if (std::abs(sigma(i, j) - sigma(j, i)) > 1e-12 * (1.0 + std::abs(sigma(i, j)))) {
        throw InputError("sigma must be symmetric");
      }
    }
}

}  // namespace

CostReport allocate_and_score(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& c0) {
  check_cost_inputs(sigma, c0);
  const Eigen::Index n = sigma.rows();
  CostReport r{sigma, c0, 0.0, Eigen::MatrixXd::Zero(n, n)};
  // Optimal M_e is proportional to sqrt(w_e) sigma_e.
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const double root_w = i == j ? c0(i) * c0(i) : 2.0 * std::abs(c0(i) * c0(j));
      r.allocation(i, j) = root_w * sigma(i, j);
      total += r.allocation(i, j);
    }
  r.metric = total * total;
  if (total > 0.0) r.allocation /= total;
  return r;
}

double first_order_mse(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& c0,
                       const Eigen::MatrixXd& proportions, double total_shots) {
  check_cost_inputs(sigma, c0);
  double mse = 0.0;
  for (Eigen::Index i = 0; i < sigma.rows(); ++i)
    for (Eigen::Index j = i; j < sigma.cols(); ++j) {
      const double w = i == j ? std::pow(c0(i), 4) : 4.0 * c0(i) * c0(i) * c0(j) * c0(j);
      const double s2 = sigma(i, j) * sigma(i, j);
      if (w * s2 == 0.0) continue;
      const double m = proportions(i, j) * total_shots;
      if (m <= 0.0) return std::numeric_limits<double>::infinity();
      mse += w * s2 / m;
    }
  return mse;
}

}  // namespace qsense
