#include <gtest/gtest.h>

#include <random>

#include "chem.hpp"
#include "dense.hpp"
#include "qsense/csf.hpp"
#include "qsense/error.hpp"
#include "qsense/fermion.hpp"
#include "qsense/taper.hpp"
#include "reference.hpp"

using namespace qsense;
using oracle::dense;
using oracle::to_eigen;

TEST(Seniority, SymmetryList) {
  const auto s1 = seniority_symmetries(1);
  ASSERT_EQ(s1.size(), 1U);
  EXPECT_EQ(s1[0].to_string(), "Z0 Z1");
  const auto s2 = seniority_symmetries(2);
  ASSERT_EQ(s2.size(), 2U);
  EXPECT_EQ(s2[1].to_string(), "Z2 Z3");
  for (const auto& s : seniority_symmetries(5)) {
    const auto sq = s * s;
    EXPECT_TRUE(sq.is_identity());
    EXPECT_EQ(sq.phase(), 0);
  }
}

TEST(Seniority, ConfigValidation) {
  EXPECT_THROW(SeniorityConfig(2, 4), InputError);
  EXPECT_THROW(SeniorityConfig::from_vector({0, 2}), InputError);
  const auto v = SeniorityConfig::from_vector({0, 1, 0, 1});
  EXPECT_EQ(v.bits, 10U);
  EXPECT_EQ(v.seniority(), 2U);
  EXPECT_EQ(v.to_string(), "0101");
}

TEST(Clifford, SingleOrbital) {
  const auto uc = build_clifford(1);
  const auto r = conjugate(PauliProduct::from_ops(2, {{0, Pauli::Z}, {1, Pauli::Z}}), uc);
  EXPECT_EQ(r.to_string(), "Z0");
  EXPECT_EQ(r.phase(), 0);
}

TEST(Clifford, MapsEverySymmetryToSingleZ) {
  for (std::size_t n = 1; n <= 12; ++n) {
    const auto uc = build_clifford(n);
    const auto sym = seniority_symmetries(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = conjugate(sym[i], uc);
      EXPECT_EQ(r, PauliProduct::single(2 * n, i, Pauli::Z));
      const auto zd = conjugate(PauliProduct::single(2 * n, 2 * i + 1, Pauli::Z), uc);
      EXPECT_EQ(zd.key().x[0] & ((std::uint64_t{1} << n) - 1), 0U);
      EXPECT_EQ(zd.key().z[0] & ((std::uint64_t{1} << n) - 1), 0U);
    }
  }
}

TEST(Clifford, HartreeFockMapsToZeroConfig) {
  const std::size_t n = 4;
  const auto hf = make_csf_full(CsfSpec::hf(), n, 4);
  const auto t = taper_check(hf, build_clifford(n));
  EXPECT_EQ(t.config.bits, 0U);
  EXPECT_NEAR(std::abs(t.state[0b0011]), 1.0, 1e-15);
}

TEST(TaperCheck, SingleExcitationGivesEntangledPair) {
  const std::size_t n = 3;
  const auto full = make_csf_full(CsfSpec::single(0, 2), n, 2);
  const auto t = taper_check(full, build_clifford(n));
  EXPECT_EQ(t.config.to_string(), "101");
  // Two nonzero amplitudes: down electron on orbital 0 or on orbital 2.
  EXPECT_NEAR(std::abs(t.state[0b001]), 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(std::abs(t.state[0b100]), 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_TRUE(to_eigen(t.state).isApprox(to_eigen(make_csf_tapered(CsfSpec::single(0, 2), n, 2))));
}

TEST(TaperCheck, RejectsMixedSeniority) {
  const std::size_t n = 2;
  auto a = make_csf_full(CsfSpec::hf(), n, 2);
  const auto b = make_csf_full(CsfSpec::single(0, 1), n, 2);
  for (std::size_t k = 0; k < a.dim(); ++k) a[k] = (a[k] + b[k]) / std::sqrt(2.0);
  EXPECT_THROW(taper_check(a, build_clifford(n)), InputError);
}

TEST(TaperCheck, UntaperInverts) {
  const std::size_t n = 4;
  const auto uc = build_clifford(n);
  const auto full = make_csf_full(CsfSpec::triplet_pair(0, 1, 2, 3), n, 4);
  const auto t = taper_check(full, uc);
  EXPECT_TRUE(to_eigen(untaper(t.config, t.state, uc)).isApprox(to_eigen(full)));
}

TEST(EffectiveHamiltonian, TrivialCases) {
  const std::size_t n = 2;
  PauliSum h = PauliSum::identity(4, 0.7);
  h.add(PauliProduct::from_ops(4, {{0, Pauli::Z}}), 0.3);
  const auto uc = build_clifford(n);
  const SeniorityConfig zero(n, 0), other(n, 1);
  const auto diag = effective_hamiltonian(h, zero, zero, uc);
  EXPECT_NEAR(diag.op.constant().real(), 0.7, 1e-15);
  EXPECT_TRUE(effective_hamiltonian(h, zero, other, uc).op.empty());
  EXPECT_THROW(effective_hamiltonian(h, zero, SeniorityConfig(3, 0), uc), InputError);
}

namespace {

BasisState random_state(std::size_t n, std::size_t nelec, std::mt19937_64& rng) {
  const std::size_t nocc = nelec / 2;
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_real_distribution<double> ang(-1.0, 1.0);
  BasisState b;
  const int k = kind(rng);
  // n = 4, nelec = 4: occupied {0,1}, virtual {2,3}
  if (k == 1) b.csf = CsfSpec::single(rng() % nocc, nocc + rng() % (n - nocc));
  if (k == 2) b.csf = CsfSpec::double_singlet(0, 1, 2, 3);
  if (k == 3) b.csf = CsfSpec::triplet_pair(0, 1, 3, 2);
  std::vector<std::size_t> paired_occ, empty;
  const auto u = b.csf.unpaired();
  for (std::size_t p = 0; p < n; ++p) {
    if (std::find(u.begin(), u.end(), p) != u.end()) continue;
    (p < nocc ? paired_occ : empty).push_back(p);
  }
  for (std::size_t a : empty)
    for (std::size_t i : paired_occ) b.rotations.push_back({a, i, ang(rng)});
  return b;
}

}  // namespace

TEST(EffectiveHamiltonian, PreservesMatrixElements) {
  std::mt19937_64 rng(31);
  const std::size_t n = 4, nelec = 4;
  const auto ints = oracle::random_integrals(n, nelec, rng);
  const auto hq = jordan_wigner(ints);
  const Eigen::MatrixXcd hd = dense(hq);
  const auto uc = build_clifford(n);
  const TaperedHamiltonian th(hq, n);
  for (int trial = 0; trial < 25; ++trial) {
    const auto mu = random_state(n, nelec, rng);
    const auto nu = random_state(n, nelec, rng);
    const auto pm = prepare_tapered(mu, n, nelec);
    const auto pn = prepare_tapered(nu, n, nelec);
    const auto vm = seniority_config(mu, n), vn = seniority_config(nu, n);
    const auto fm = untaper(vm, pm, uc), fn = untaper(vn, pn, uc);
    const Complex full = to_eigen(fm).dot(hd * to_eigen(fn));
    const auto x = effective_hamiltonian(hq, vm, vn, uc);
    EXPECT_NEAR(std::abs(matrix_element_exact(pm, x.op, pn) - full), 0.0, 1e-10);
    const auto y = th.effective(vm, vn);
    EXPECT_NEAR(one_norm(y.op - x.op), 0.0, 1e-12);
    EXPECT_LE(x.op.size(), hq.size());
    if (vm == vn) {
      EXPECT_TRUE(x.op.is_hermitian(1e-12));
    } else {
      const auto back = th.effective(vn, vm);
      EXPECT_NEAR(one_norm(back.op - x.op.adjoint()), 0.0, 1e-12);
    }
  }
}

TEST(EffectiveHamiltonian, WaterDiagonalBlockIsSmaller) {
  const auto ints = read_fcidump(oracle::fixture("h2o_1.0"));
  const auto hq = jordan_wigner(ints);
  const TaperedHamiltonian th(hq, ints.n_orb);
  const SeniorityConfig z(7, 0);
  const auto x = th.effective(z, z);
  EXPECT_LT(x.op.size(), hq.size() / 4);
  // <HF|H|HF> through the tapered register.
  const auto hf = make_csf_tapered(CsfSpec::hf(), 7, 10);
  EXPECT_NEAR(expectation(hf, x.op).real(), hf_energy(ints), 1e-10);
}
