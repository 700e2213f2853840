#include "qsense/solver.hpp"

#include <spdlog/spdlog.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <tuple>

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

Eigen::Map<const Eigen::VectorXcd> view(const StateVector& s) {
  return {s.amplitudes().data(), static_cast<Eigen::Index>(s.dim())};
}

template <class V>
void fix_sign(V& c) {
  Eigen::Index arg = 0;
  for (Eigen::Index k = 1; k < c.size(); ++k)
    if (std::abs(c(k)) > std::abs(c(arg)) + 1e-12) arg = k;
  if constexpr (std::is_same_v<typename V::Scalar, double>) {
    if (c(arg) < 0.0) c = -c;
  } else {
    const Complex p = c(arg);
    if (std::abs(p) > 0.0) c *= std::conj(p) / std::abs(p);
  }
}

template <class M>
void check_hermitian(const M& h) {
  if (h.rows() != h.cols() || h.rows() == 0) throw InputError("matrix must be square and nonempty");
  const double scale = 1.0 + h.cwiseAbs().maxCoeff();
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) throw InputError("matrix is not Hermitian");
}

template <class M, class V>
V lowest_vector(const Eigen::SelfAdjointEigenSolver<M>& es) {
  const auto& w = es.eigenvalues();
  const auto& vecs = es.eigenvectors();
  const double tol = 1e-10 * std::max(1.0, std::abs(w(0)));
  Eigen::Index d = 1;
  while (d < w.size() && w(d) - w(0) < tol) ++d;
  if (d == 1) return vecs.col(0);
  const auto block = vecs.leftCols(d);
  for (Eigen::Index k = 0; k < vecs.rows(); ++k) {
    V v = block * block.row(k).adjoint();
    if (v.norm() > 1e-8) return v / v.norm();
  }
  return vecs.col(0);
}

}  // namespace

EigenPair ground_state(const Eigen::MatrixXd& h) {
  check_hermitian(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  Eigen::VectorXd c = lowest_vector<Eigen::MatrixXd, Eigen::VectorXd>(es);
  fix_sign(c);
  return {es.eigenvalues()(0), std::move(c)};
}

ComplexEigenPair ground_state(const Eigen::MatrixXcd& h) {
  check_hermitian(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXcd c = lowest_vector<Eigen::MatrixXcd, Eigen::VectorXcd>(es);
  fix_sign(c);
  return {es.eigenvalues()(0), std::move(c)};
}

// ---------------------------------------------------------------------------

Eigen::SparseMatrix<Complex> sparse_matrix(const PauliSum& op) {
  const std::size_t n = op.n_qubits();
  if (n > 24) throw InputError("sparse_matrix supports at most 24 qubits");
  const std::uint64_t dim = std::uint64_t{1} << n;
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(op.size() * dim);
  for (const auto& [key, c] : op) {
    const std::uint64_t x = key.x[0], z = key.z[0];
    const Complex base = c * i_pow(std::popcount(x & z));
    for (std::uint64_t k = 0; k < dim; ++k) {
      const Complex v = (std::popcount(k & z) & 1) ? -base : base;
      trip.emplace_back(static_cast<Eigen::Index>(k ^ x), static_cast<Eigen::Index>(k), v);
    }
  }
  Eigen::SparseMatrix<Complex> m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setFromTriplets(trip.begin(), trip.end());
  m.prune(Complex(0.0, 0.0), 1e-14);
  return m;
}

SubspaceEvaluator::SubspaceEvaluator(const PauliSum& hq, std::size_t n_orb, std::size_t n_elec)
    : n_orb_(n_orb), n_elec_(n_elec), tapered_(hq, n_orb) {
  if (n_elec % 2 != 0 || n_elec > 2 * n_orb) throw InputError("electron count must be even and fit the orbitals");
}

PreparedState SubspaceEvaluator::prepare(const BasisState& s) const {
  return {seniority_config(s, n_orb_), prepare_tapered(s, n_orb_, n_elec_)};
}

std::vector<PreparedState> SubspaceEvaluator::prepare(const std::vector<BasisState>& basis) const {
  std::vector<PreparedState> out;
  out.reserve(basis.size());
  for (const auto& b : basis) out.push_back(prepare(b));
  return out;
}

const SubspaceEvaluator::Cached& SubspaceEvaluator::cached(const SeniorityConfig& bra,
                                                           const SeniorityConfig& ket) {
  const auto key = std::make_pair(bra.bits, ket.bits);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    EffectiveHamiltonian eff = tapered_.effective(bra, ket);
    Eigen::SparseMatrix<Complex> mat = sparse_matrix(eff.op);
    it = cache_.emplace(key, Cached{std::move(eff), std::move(mat)}).first;
  }
  return it->second;
}

const EffectiveHamiltonian& SubspaceEvaluator::effective(const SeniorityConfig& bra,
                                                         const SeniorityConfig& ket) {
  return cached(bra, ket).eff;
}

double SubspaceEvaluator::element(const PreparedState& a, const PreparedState& b) {
  const Cached& c = cached(a.config, b.config);
  const Eigen::VectorXcd hb = c.mat * view(b.state);
  return view(a.state).dot(hb).real();
}

Eigen::MatrixXd SubspaceEvaluator::matrix(const std::vector<PreparedState>& states) {
  const auto n = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd h(n, n);
  for (Eigen::Index mu = 0; mu < n; ++mu)
    for (Eigen::Index nu = mu; nu < n; ++nu) h(mu, nu) = h(nu, mu) = element(states[mu], states[nu]);
  return h;
}

void SubspaceEvaluator::update_row(Eigen::MatrixXd& h, const std::vector<PreparedState>& states,
                                   std::size_t mu) {
  const auto m = static_cast<Eigen::Index>(mu);
  for (Eigen::Index nu = 0; nu < h.rows(); ++nu) h(m, nu) = h(nu, m) = element(states[mu], states[nu]);
}

void check_orthonormal(const std::vector<PreparedState>& states, double tol) {
  for (std::size_t a = 0; a < states.size(); ++a)
    for (std::size_t b = a; b < states.size(); ++b) {
      if (states[a].config != states[b].config) continue;
      const double target = a == b ? 1.0 : 0.0;
      if (std::abs(inner(states[a].state, states[b].state) - target) > tol) {
        throw ContractViolation("basis states " + std::to_string(a) + " and " + std::to_string(b) +
                                " are not orthonormal");
      }
    }
}

// ---------------------------------------------------------------------------

ElementSampler::ElementSampler(const ElementMeasurement& m) {
  const ElementVariance v = element_variance(m.state, m.fragments);
  fragment_sigma_ = v.fragment_sigma;
  sigma_ = v.sigma;
  exact_ = expectation(m.state, m.op).real();
  dists_.reserve(m.fragments.fragments.size());
  for (const auto& f : m.fragments.fragments) dists_.push_back(fragment_distribution(m.state, f));
}

double ElementSampler::estimate(std::size_t shots, std::uint64_t seed, std::size_t* used) const {
  double total = 0.0;
  std::size_t spent = 0;
  for (std::size_t a = 0; a < dists_.size(); ++a) {
    if (fragment_sigma_[a] <= 1e-12 || shots == 0) {
      total += dists_[a].mean();
      continue;
    }
    const auto m = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(shots) * fragment_sigma_[a] / sigma_)));
    total += sample_distribution(dists_[a], m, derive_seed(seed, a), a).estimate;
    spent += m;
  }
  if (used) *used = spent;
  return total;
}

bool classically_evaluable(const BasisState& a, const BasisState& b) {
  return a.rotations.empty() && b.rotations.empty();
}

ElementMeasurement plan_element(SubspaceEvaluator& ev, const PreparedState& a, const PreparedState& b,
                                bool diagonal, bool constant_shift, double h_mm, double h_nn) {
  const EffectiveHamiltonian& eff = ev.effective(a.config, b.config);
  if (diagonal) return plan_diagonal(eff, a.state);
  return plan_off_diagonal(eff, a.state, b.state, constant_shift && a.config == b.config, h_mm, h_nn);
}

namespace {

struct Analysis {
  std::vector<ElementRecord> records;
  std::vector<std::optional<ElementSampler>> samplers;
  Eigen::MatrixXd sigma;
};

Analysis analyze(const std::vector<BasisState>& basis, const std::vector<PreparedState>& states,
                 const Eigen::MatrixXd& h, SubspaceEvaluator& ev, bool shift) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Analysis out;
  out.sigma = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index mu = 0; mu < n; ++mu)
    for (Eigen::Index nu = mu; nu < n; ++nu) {
      ElementRecord r;
      r.mu = static_cast<std::size_t>(mu);
      r.nu = static_cast<std::size_t>(nu);
      r.exact = r.value = h(mu, nu);
      r.classical = classically_evaluable(basis[r.mu], basis[r.nu]);
      if (r.classical) {
        out.samplers.emplace_back();
      } else {
        const ElementMeasurement m =
            plan_element(ev, states[r.mu], states[r.nu], mu == nu, shift, h(mu, mu), h(nu, nu));
        r.terms = m.op.size();
        r.one_norm = one_norm(m.op);
        r.fragments = m.fragments.fragments.size();
        out.samplers.emplace_back(ElementSampler(m));
        r.sigma = out.samplers.back()->sigma();
        out.sigma(mu, nu) = out.sigma(nu, mu) = r.sigma;
      }
      out.records.push_back(r);
    }
  return out;
}

}  // namespace

CostReport cost_report(const std::vector<BasisState>& basis, SubspaceEvaluator& ev, bool constant_shift) {
  if (basis.empty()) throw InputError("basis must be nonempty");
  const auto states = ev.prepare(basis);
  const Eigen::MatrixXd h = ev.matrix(states);
  const Analysis a = analyze(basis, states, h, ev, constant_shift);
  return allocate_and_score(a.sigma, ground_state(h).c0);
}

SubspaceProblem build_subspace(const std::vector<BasisState>& basis, SubspaceEvaluator& ev,
                               const std::optional<SamplingOptions>& sampling) {
  if (basis.empty()) throw InputError("basis must be nonempty");
  const auto states = ev.prepare(basis);
  check_orthonormal(states);
  SubspaceProblem p;
  p.basis = basis;
  p.hmat = ev.matrix(states);
  const EigenPair exact = ground_state(p.hmat);
  p.e_min = exact.e_min;
  p.c0 = exact.c0;
  if (!sampling) {
    const auto n = p.hmat.rows();
    for (Eigen::Index mu = 0; mu < n; ++mu)
      for (Eigen::Index nu = mu; nu < n; ++nu) {
        ElementRecord r;
        r.mu = static_cast<std::size_t>(mu);
        r.nu = static_cast<std::size_t>(nu);
        r.exact = r.value = p.hmat(mu, nu);
        r.classical = classically_evaluable(basis[r.mu], basis[r.nu]);
        p.elements.push_back(r);
      }
    return p;
  }
  if (sampling->shots == 0) throw InputError("sampled mode needs at least one shot");
  Analysis a = analyze(basis, states, p.hmat, ev, sampling->constant_shift);
  p.cost = allocate_and_score(a.sigma, exact.c0);
  const auto total = static_cast<double>(sampling->shots);
  for (std::size_t e = 0; e < a.records.size(); ++e) {
    ElementRecord& r = a.records[e];
    if (r.classical || r.sigma <= 0.0) continue;
    const double share = p.cost->allocation(static_cast<Eigen::Index>(r.mu), static_cast<Eigen::Index>(r.nu));
    const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(total * share)));
    r.value = a.samplers[e]->estimate(m, derive_seed(sampling->seed, r.mu, r.nu), &r.shots);
    const auto mu = static_cast<Eigen::Index>(r.mu), nu = static_cast<Eigen::Index>(r.nu);
    p.hmat(mu, nu) = p.hmat(nu, mu) = r.value;
  }
  p.elements = std::move(a.records);
  const EigenPair sampled = ground_state(p.hmat);
  p.e_min = sampled.e_min;
  p.c0 = sampled.c0;
  return p;
}

// ---------------------------------------------------------------------------

namespace {

Eigen::SparseMatrix<double> sector_matrix(const PauliSum& op, const std::vector<std::uint64_t>& dets) {
  std::vector<Eigen::Triplet<double>> trip;
  const auto dim = static_cast<Eigen::Index>(dets.size());
  for (const auto& [key, c] : op) {
    const std::uint64_t x = key.x[0], z = key.z[0];
    const Complex base = c * i_pow(std::popcount(x & z));
    for (Eigen::Index j = 0; j < dim; ++j) {
      const std::uint64_t k = dets[static_cast<std::size_t>(j)];
      const auto it = std::lower_bound(dets.begin(), dets.end(), k ^ x);
      if (it == dets.end() || *it != (k ^ x)) continue;
      const Complex v = (std::popcount(k & z) & 1) ? -base : base;
      if (std::abs(v.imag()) > 1e-10) throw ContractViolation("sector Hamiltonian is not real");
      trip.emplace_back(static_cast<Eigen::Index>(it - dets.begin()), j, v.real());
    }
  }
  Eigen::SparseMatrix<double> m(dim, dim);
  m.setFromTriplets(trip.begin(), trip.end());
  m.prune(0.0, 1e-14);
  return m;
}

// Lanczos with full reorthogonalization; returns the lowest Ritz pair.
std::pair<double, Eigen::VectorXd> lanczos(const Eigen::SparseMatrix<double>& a) {
  const Eigen::Index dim = a.rows();
  const Eigen::Index max_k = std::min<Eigen::Index>(dim, 400);
  std::mt19937_64 rng(0x51a7e5u);
  std::normal_distribution<double> g;
  Eigen::MatrixXd v(dim, max_k);
  Eigen::VectorXd q(dim);
  for (Eigen::Index k = 0; k < dim; ++k) q(k) = g(rng);
  v.col(0) = q / q.norm();
  std::vector<double> alpha, beta;
  double theta = 0.0;
  Eigen::VectorXd ritz;
  for (Eigen::Index k = 0; k < max_k; ++k) {
    Eigen::VectorXd w = a * v.col(k);
    alpha.push_back(v.col(k).dot(w));
    for (int pass = 0; pass < 2; ++pass) w -= v.leftCols(k + 1) * (v.leftCols(k + 1).transpose() * w);
    const double b = w.norm();
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k + 1, k + 1);
    for (Eigen::Index i = 0; i <= k; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i < k) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    theta = es.eigenvalues()(0);
    const Eigen::VectorXd s = es.eigenvectors().col(0);
    const bool done = b * std::abs(s(k)) < 1e-10 || b < 1e-12 || k + 1 == max_k;
    if (done) {
      ritz = v.leftCols(k + 1) * s;
      if (b * std::abs(s(k)) > 1e-6) spdlog::warn("lanczos stopped with residual {:.2e}", b * std::abs(s(k)));
      break;
    }
    beta.push_back(b);
    v.col(k + 1) = w / b;
  }
  return {theta, ritz / ritz.norm()};
}

}  // namespace

FciResult fci_oracle(const PauliSum& hq, std::size_t n_elec, double sz, const FciOptions& opt) {
  const std::size_t nq = hq.n_qubits();
  if (nq % 2 != 0 || nq == 0 || nq > 28) throw InputError("FCI needs an even qubit count of at most 28");
  const std::size_t n_orb = nq / 2;
  const double two_sz = 2.0 * sz;
  if (std::abs(two_sz - std::round(two_sz)) > 1e-9) throw SectorError("S_z must be a half-integer");
  const long tsz = std::lround(two_sz);
  const long ne = static_cast<long>(n_elec);
  if ((ne + tsz) % 2 != 0 || std::abs(tsz) > ne) throw SectorError("S_z incompatible with the electron count");
  const long n_up = (ne + tsz) / 2, n_dn = (ne - tsz) / 2;
  if (n_up > static_cast<long>(n_orb) || n_dn > static_cast<long>(n_orb)) throw SectorError("sector is empty");

  std::uint64_t up_mask = 0;
  for (std::size_t i = 0; i < n_orb; ++i) up_mask |= std::uint64_t{1} << (2 * i);
  const std::uint64_t dn_mask = up_mask << 1;
  FciResult r;
  r.n_elec = n_elec;
  r.sz = sz;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << nq); ++k) {
    if (std::popcount(k & up_mask) == n_up && std::popcount(k & dn_mask) == n_dn) r.determinants.push_back(k);
  }
  if (r.determinants.empty()) throw SectorError("sector is empty");
  r.dimension = r.determinants.size();

  const Eigen::SparseMatrix<double> h = sector_matrix(hq, r.determinants);
  Eigen::SparseMatrix<double> a = h;
  if (opt.singlet) a += opt.penalty * sector_matrix(s2_operator(n_orb), r.determinants);
  if (r.dimension < opt.dense_limit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(a)};
    r.vector = es.eigenvectors().col(0);
  } else {
    r.vector = lanczos(a).second;
  }
  fix_sign(r.vector);
  r.energy = r.vector.dot(h * r.vector);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

// Ground energy as a function of the rotation angles, updating only the
// states whose angles changed since the previous call.
class AngleObjective {
 public:
  AngleObjective(std::vector<BasisState>& basis, SubspaceEvaluator& ev) : basis_(basis), ev_(ev) {
    states_ = ev_.prepare(basis_);
    std::map<std::tuple<std::uint64_t, std::size_t, std::size_t, std::size_t>, std::size_t> index;
    for (std::size_t mu = 0; mu < basis_.size(); ++mu)
      for (std::size_t r = 0; r < basis_[mu].rotations.size(); ++r) {
        const auto& rot = basis_[mu].rotations[r];
        const auto key = std::make_tuple(states_[mu].config.bits, r, rot.target, rot.source);
        auto [it, fresh] = index.emplace(key, slots_.size());
        if (fresh) slots_.emplace_back();
        slots_[it->second].emplace_back(mu, r);
      }
    h_ = ev_.matrix(states_);
  }

  std::size_t size() const { return slots_.size(); }

  Eigen::VectorXd angles() const {
    Eigen::VectorXd x(static_cast<Eigen::Index>(slots_.size()));
    for (std::size_t k = 0; k < slots_.size(); ++k) x(static_cast<Eigen::Index>(k)) = theta(k);
    return x;
  }

  double theta(std::size_t k) const {
    const auto [mu, r] = slots_[k].front();
    return basis_[mu].rotations[r].theta;
  }

  double set(std::size_t k, double value) {
    std::vector<bool> dirty(basis_.size(), false);
    assign(k, value, dirty);
    return refresh(dirty);
  }

  double set_all(const Eigen::VectorXd& x) {
    std::vector<bool> dirty(basis_.size(), false);
    for (std::size_t k = 0; k < slots_.size(); ++k) assign(k, x(static_cast<Eigen::Index>(k)), dirty);
    return refresh(dirty);
  }

  double energy() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h_, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  }

 private:
  void assign(std::size_t k, double value, std::vector<bool>& dirty) {
    for (const auto& [mu, r] : slots_[k]) {
      auto& t = basis_[mu].rotations[r].theta;
      if (t != value) {
        t = value;
        dirty[mu] = true;
      }
    }
  }

  double refresh(const std::vector<bool>& dirty) {
    for (std::size_t mu = 0; mu < basis_.size(); ++mu)
      if (dirty[mu]) states_[mu] = ev_.prepare(basis_[mu]);
    for (std::size_t mu = 0; mu < basis_.size(); ++mu)
      if (dirty[mu]) ev_.update_row(h_, states_, mu);
    return energy();
  }

  std::vector<BasisState>& basis_;
  SubspaceEvaluator& ev_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> slots_;
  std::vector<PreparedState> states_;
  Eigen::MatrixXd h_;
};

}  // namespace

VoResult vo_optimize(std::vector<BasisState> basis, SubspaceEvaluator& ev, const VoOptions& opt) {
  if (basis.empty()) throw InputError("basis must be nonempty");
  VoResult out;
  AngleObjective obj(basis, ev);
  // A zero angle can sit on a stationary point; start slightly off it.
  Eigen::VectorXd x = obj.angles();
  for (Eigen::Index k = 0; k < x.size(); ++k)
    if (x(k) == 0.0) x(k) = opt.initial_kick;
  double e = obj.set_all(x);
  out.history.push_back(e);
  const double two_pi = 2.0 * std::numbers::pi;
  const std::size_t grid = std::max<std::size_t>(opt.grid_points, 3);
  const double spacing = two_pi / static_cast<double>(grid);

  for (std::size_t sweep = 0; sweep < opt.max_sweeps && obj.size() > 0; ++sweep) {
    const double start = e;
    for (std::size_t k = 0; k < obj.size(); ++k) {
      const double t0 = obj.theta(k);
      double best_t = t0, best_e = e;
      for (std::size_t g = 1; g < grid; ++g) {
        const double t = t0 + spacing * static_cast<double>(g);
        const double eg = obj.set(k, t);
        if (eg < best_e) {
          best_e = eg;
          best_t = t;
        }
      }
      auto f = [&](double t) { return obj.set(k, t); };
      std::uintmax_t iters = 100;
      const auto [tb, eb] = boost::math::tools::brent_find_minima(f, best_t - spacing, best_t + spacing,
                                                                  std::numeric_limits<double>::digits / 2, iters);
      if (eb < best_e) {
        best_e = eb;
        best_t = tb;
      }
      if (best_e < e) {
        e = obj.set(k, std::remainder(best_t, two_pi));
      } else {
        e = obj.set(k, t0);
      }
    }
    out.sweeps = sweep + 1;
    out.history.push_back(e);
    if (start - e < opt.tol) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged && obj.size() > 0) {
    spdlog::warn("rotation optimization hit the sweep cap ({}), keeping the best point", opt.max_sweeps);
  }
  if (opt.polish && obj.size() > 0) {
    const Eigen::VectorXd before = obj.angles();
    const MinimizeResult m =
        bfgs_fd([&](const Eigen::VectorXd& v) { return obj.set_all(v); }, before, 200, 1e-12);
    if (m.value < e) {
      e = obj.set_all(m.x);
      out.history.push_back(e);
    } else {
      obj.set_all(before);
    }
  }
  if (obj.size() == 0) out.converged = true;
  out.energy = e;
  out.basis = std::move(basis);
  return out;
}

// ---------------------------------------------------------------------------

RelaxResult relax_orbitals(const std::vector<BasisState>& basis, const FermionIntegrals& ints,
                           const RelaxOptions& opt) {
  if (basis.empty()) throw InputError("basis must be nonempty");
  const std::size_t n = ints.n_orb;
  std::vector<std::pair<std::size_t, std::size_t>> params;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) {
      const bool ov = p < ints.n_occ() && q >= ints.n_occ();
      if (opt.full || ov) params.emplace_back(p, q);
    }
  auto rotation = [&](const Eigen::VectorXd& x) {
    OrbitalRotation t(n);
    for (std::size_t k = 0; k < params.size(); ++k) t.set(params[k].first, params[k].second, x(static_cast<Eigen::Index>(k)));
    return t;
  };
  auto energy = [&](const Eigen::VectorXd& x) {
    const FermionIntegrals rotated = rotate_orbitals(ints, rotation(x));
    SubspaceEvaluator ev(jordan_wigner(rotated), n, ints.n_elec);
    return ground_state(ev.matrix(ev.prepare(basis))).e_min;
  };
  RelaxResult out;
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(params.size()));
  out.initial = energy(x0);
  std::vector<double> trace{out.initial};
  double best = out.initial;
  const MinimizeResult m = bfgs_fd(
      [&](const Eigen::VectorXd& x) {
        const double e = energy(x);
        if (e < best) {
          best = e;
          trace.push_back(e);
        }
        return e;
      },
      x0, opt.max_iterations, opt.tol);
  if (!m.converged) spdlog::warn("orbital relaxation stopped after {} iterations", m.iterations);
  out.rotation = rotation(m.x);
  out.energy = std::min(m.value, out.initial);
  if (m.value > out.initial) out.rotation = rotation(x0);
  out.history = std::move(trace);
  out.converged = m.converged;
  return out;
}

}  // namespace qsense
