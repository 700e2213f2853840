#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "chem.hpp"
#include "dense.hpp"
#include "qsense/error.hpp"
#include "qsense/fermion.hpp"
#include "qsense/solver.hpp"
#include "reference.hpp"

using namespace qsense;

namespace {

std::vector<BasisState> h2_vo_basis() { return {{CsfSpec::hf(), {{1, 0, 0.0}}, "hf"}}; }

double sector_min_dense(const FermionIntegrals& ints, std::size_t ne, int two_sz) {
  const Eigen::MatrixXd h = oracle::fermionic_dense(ints);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    int up = 0, dn = 0;
    for (std::size_t p = 0; p < ints.n_orb; ++p) {
      up += static_cast<int>((k >> (2 * p)) & 1);
      dn += static_cast<int>((k >> (2 * p + 1)) & 1);
    }
    if (static_cast<std::size_t>(up + dn) == ne && up - dn == two_sz) keep.push_back(k);
  }
  Eigen::MatrixXd sub(keep.size(), keep.size());
  for (std::size_t x = 0; x < keep.size(); ++x)
    for (std::size_t y = 0; y < keep.size(); ++y) sub(x, y) = h(keep[x], keep[y]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

TEST(GroundState, DiagonalPicksLowest) {
  const Eigen::MatrixXd h = Eigen::Vector3d(2.0, -1.0, 3.0).asDiagonal();
  const auto gs = ground_state(h);
  EXPECT_DOUBLE_EQ(gs.e_min, -1.0);
  EXPECT_NEAR(gs.c0(1), 1.0, 1e-15);
}

TEST(GroundState, SignOfLargestEntryIsPositive) {
  Eigen::Matrix2d h;
  h << 0.0, 0.3, 0.3, 1.0;
  const auto gs = ground_state(Eigen::MatrixXd(h));
  Eigen::Index k = 0;
  gs.c0.cwiseAbs().maxCoeff(&k);
  EXPECT_GT(gs.c0(k), 0.0);
  EXPECT_NEAR((h * gs.c0 - gs.e_min * gs.c0).norm(), 0.0, 1e-12);
}

TEST(GroundState, DegenerateLevelPicksLowestIndex) {
  const Eigen::MatrixXd h = Eigen::MatrixXd::Identity(3, 3);
  const auto gs = ground_state(h);
  EXPECT_NEAR(gs.c0(0), 1.0, 1e-12);
}

TEST(GroundState, RejectsNonHermitian) {
  Eigen::MatrixXd h(2, 2);
  h << 0.0, 1.0, 0.5, 0.0;
  EXPECT_THROW(ground_state(h), InputError);
  EXPECT_THROW(ground_state(Eigen::MatrixXd(2, 3)), InputError);
}

TEST(GroundState, ComplexMatchesRealForRealInput) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(5, 5);
  for (Eigen::Index r = 0; r < 5; ++r)
    for (Eigen::Index c = 0; c < 5; ++c) a(r, c) = g(rng);
  const Eigen::MatrixXd h = a + a.transpose();
  const auto re = ground_state(h);
  const auto cx = ground_state(Eigen::MatrixXcd(h.cast<Complex>()));
  EXPECT_NEAR(re.e_min, cx.e_min, 1e-12);
  EXPECT_NEAR((re.c0.cast<Complex>() - cx.c0).norm(), 0.0, 1e-10);
}

TEST(Fci, MatchesExternalReference) {
  for (const char* name : {"h2_0.7414", "h2o_1.0"}) {
    const auto ints = read_fcidump(oracle::fixture(name));
    const auto hq = jordan_wigner(ints);
    const auto ref = oracle::reference(name);
    EXPECT_NEAR(fci_oracle(hq, ints.n_elec, 0.0).energy, ref.at("e_fci_sz0").get<double>(), 1e-8) << name;
    EXPECT_NEAR(fci_oracle(hq, ints.n_elec, 0.0, {true}).energy, ref.at("e_fci_singlet").get<double>(), 1e-8)
        << name;
  }
}

TEST(Fci, MatchesDenseSectorOracle) {
  std::mt19937_64 rng(17);
  const auto ints = oracle::random_integrals(3, 2, rng);
  const auto hq = jordan_wigner(ints);
  EXPECT_NEAR(fci_oracle(hq, 2, 0.0).energy, sector_min_dense(ints, 2, 0), 1e-10);
  EXPECT_NEAR(fci_oracle(hq, 3, 0.5).energy, sector_min_dense(ints, 3, 1), 1e-10);
}

TEST(Fci, OneElectronSectorIsOneBodyBlock) {
  std::mt19937_64 rng(3);
  const auto ints = oracle::random_integrals(4, 2, rng);
  const auto r = fci_oracle(jordan_wigner(ints), 1, 0.5);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ints.h, Eigen::EigenvaluesOnly);
  EXPECT_NEAR(r.energy, es.eigenvalues()(0) + ints.e_core, 1e-10);
  EXPECT_EQ(r.dimension, 4U);
}

TEST(Fci, VectorCarriesSectorQuantumNumbers) {
  std::mt19937_64 rng(9);
  const auto ints = oracle::random_integrals(4, 4, rng);
  const auto r = fci_oracle(jordan_wigner(ints), 4, 0.0, {true});
  std::vector<Complex> amps(std::size_t{1} << 8);
  for (std::size_t k = 0; k < r.determinants.size(); ++k) amps[r.determinants[k]] = r.vector(static_cast<Eigen::Index>(k));
  const StateVector psi(8, std::move(amps));
  EXPECT_NEAR(expectation(psi, number_operator(4)).real(), 4.0, 1e-9);
  EXPECT_NEAR(expectation(psi, s2_operator(4)).real(), 0.0, 1e-8);
}

TEST(Fci, LanczosMatchesDense) {
  std::mt19937_64 rng(21);
  const auto ints = oracle::random_integrals(5, 4, rng);
  const auto hq = jordan_wigner(ints);
  FciOptions lanczos;
  lanczos.dense_limit = 10;
  EXPECT_NEAR(fci_oracle(hq, 4, 0.0, lanczos).energy, fci_oracle(hq, 4, 0.0).energy, 1e-9);
  lanczos.singlet = true;
  FciOptions dense;
  dense.singlet = true;
  EXPECT_NEAR(fci_oracle(hq, 4, 0.0, lanczos).energy, fci_oracle(hq, 4, 0.0, dense).energy, 1e-9);
}

TEST(Fci, EmptySectorsThrow) {
  std::mt19937_64 rng(2);
  const auto hq = jordan_wigner(oracle::random_integrals(2, 2, rng));
  EXPECT_THROW(fci_oracle(hq, 2, 0.5), SectorError);
  EXPECT_THROW(fci_oracle(hq, 2, 2.0), SectorError);
  EXPECT_THROW(fci_oracle(hq, 5, 0.5), SectorError);
}

TEST(Subspace, HartreeFockAloneGivesHfEnergy) {
  const auto ints = read_fcidump(oracle::fixture("h2o_1.0"));
  SubspaceEvaluator ev(jordan_wigner(ints), ints.n_orb, ints.n_elec);
  const auto p = build_subspace({{CsfSpec::hf(), {}, "hf"}}, ev);
  ASSERT_EQ(p.hmat.rows(), 1);
  EXPECT_NEAR(p.e_min, hf_energy(ints), 1e-10);
  EXPECT_NEAR(p.e_min, oracle::reference("h2o_1.0").at("e_hf").get<double>(), 1e-8);
}

TEST(Subspace, RejectsOverlappingStates) {
  const auto ints = read_fcidump(oracle::fixture("h2o_1.0"));
  SubspaceEvaluator ev(jordan_wigner(ints), ints.n_orb, ints.n_elec);
  const std::vector<BasisState> dup{{CsfSpec::hf(), {}, "a"}, {CsfSpec::hf(), {{5, 4, 0.1}}, "b"}};
  EXPECT_THROW(build_subspace(dup, ev), ContractViolation);
}

TEST(Subspace, MatrixIsSymmetricAndAboveFci) {
  const auto ints = read_fcidump(oracle::fixture("h2o_1.0"));
  const auto hq = jordan_wigner(ints);
  SubspaceEvaluator ev(hq, ints.n_orb, ints.n_elec);
  const std::vector<BasisState> basis{{CsfSpec::hf(), {{5, 4, 0.1}, {6, 3, -0.05}}, "hf"},
                                      {CsfSpec::single(4, 5), {{6, 3, 0.02}}, "s"},
                                      {CsfSpec::double_singlet(3, 4, 5, 6), {}, "d"},
                                      {CsfSpec::triplet_pair(3, 4, 5, 6), {}, "t"}};
  const auto p = build_subspace(basis, ev);
  EXPECT_NEAR((p.hmat - p.hmat.transpose()).cwiseAbs().maxCoeff(), 0.0, 1e-12);
  EXPECT_GE(p.e_min, fci_oracle(hq, ints.n_elec, 0.0).energy - 1e-10);
  EXPECT_EQ(p.elements.size(), 10U);
}

TEST(Vo, ReachesFciForHydrogen) {
  for (const char* name : {"h2_0.7414", "h2_1.5", "h2_2.0"}) {
    const auto ints = read_fcidump(oracle::fixture(name));
    const auto hq = jordan_wigner(ints);
    SubspaceEvaluator ev(hq, ints.n_orb, ints.n_elec);
    const auto r = vo_optimize(h2_vo_basis(), ev);
    EXPECT_NEAR(r.energy, fci_oracle(hq, 2, 0.0).energy, 1e-8) << name;
    EXPECT_TRUE(r.converged);
    for (std::size_t k = 1; k < r.history.size(); ++k) EXPECT_LE(r.history[k], r.history[k - 1] + 1e-14);
  }
}

TEST(Vo, SharedAnglesKeepConfigOrthonormal) {
  const auto ints = read_fcidump(oracle::fixture("h2o_1.0"));
  SubspaceEvaluator ev(jordan_wigner(ints), ints.n_orb, ints.n_elec);
  CsfSpec moved = CsfSpec::hf();
  moved.pair_moves.push_back({5, 4});
  const std::vector<PairRotation> rots{{6, 3, 0.0}, {6, 2, 0.0}};
  const auto r = vo_optimize({{CsfSpec::hf(), rots, "hf"}, {moved, rots, "m"}}, ev);
  EXPECT_NO_THROW(check_orthonormal(ev.prepare(r.basis)));
  EXPECT_DOUBLE_EQ(r.basis[0].rotations[0].theta, r.basis[1].rotations[0].theta);
  EXPECT_LT(r.energy, hf_energy(ints));
}

TEST(Sampling, SameSeedSameMatrix) {
  const auto ints = read_fcidump(oracle::fixture("h2o_1.0"));
  SubspaceEvaluator ev(jordan_wigner(ints), ints.n_orb, ints.n_elec);
  const std::vector<BasisState> basis{{CsfSpec::hf(), {{5, 4, 0.1}}, "hf"}, {CsfSpec::single(4, 6), {}, "s"}};
  const SamplingOptions opt{100000, 7, true};
  const auto a = build_subspace(basis, ev, opt);
  const auto b = build_subspace(basis, ev, opt);
  EXPECT_EQ(a.hmat, b.hmat);
  const auto c = build_subspace(basis, ev, SamplingOptions{100000, 8, true});
  EXPECT_NE(a.hmat, c.hmat);
}

TEST(Sampling, ErrorShrinksWithShots) {
  const auto ints = read_fcidump(oracle::fixture("h2o_1.0"));
  SubspaceEvaluator ev(jordan_wigner(ints), ints.n_orb, ints.n_elec);
  const std::vector<BasisState> basis{{CsfSpec::hf(), {{5, 4, 0.1}}, "hf"}, {CsfSpec::single(4, 6), {{5, 3, 0.05}}, "s"}};
  const double exact = build_subspace(basis, ev).e_min;
  auto rms = [&](std::size_t shots) {
    double s = 0.0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const double e = build_subspace(basis, ev, SamplingOptions{shots, seed, true}).e_min - exact;
      s += e * e;
    }
    return std::sqrt(s / 30.0);
  };
  const double coarse = rms(10000), fine = rms(1000000);
  // Ten times the shot-noise scale separates the two with wide margin.
  EXPECT_LT(fine, coarse / 4.0);
}

TEST(Sampling, ClassicalElementsStayExact) {
  const auto ints = read_fcidump(oracle::fixture("h2o_1.0"));
  SubspaceEvaluator ev(jordan_wigner(ints), ints.n_orb, ints.n_elec);
  const std::vector<BasisState> basis{{CsfSpec::hf(), {}, "hf"}, {CsfSpec::single(4, 6), {}, "s"}};
  const auto p = build_subspace(basis, ev, SamplingOptions{1000, 1, true});
  for (const auto& e : p.elements) {
    EXPECT_TRUE(e.classical);
    EXPECT_EQ(e.shots, 0U);
    EXPECT_DOUBLE_EQ(e.value, e.exact);
  }
}

TEST(Relax, EnergyNeverRises) {
  const auto ints = read_fcidump(oracle::fixture("h2o_1.0"));
  const std::vector<BasisState> basis{{CsfSpec::hf(), {{5, 4, 0.05}}, "hf"}, {CsfSpec::single(4, 5), {}, "s"}};
  RelaxOptions opt;
  opt.max_iterations = 8;
  const auto r = relax_orbitals(basis, ints, opt);
  EXPECT_LE(r.energy, r.initial + 1e-12);
  for (std::size_t k = 1; k < r.history.size(); ++k) EXPECT_LE(r.history[k], r.history[k - 1] + 1e-12);
  const Eigen::MatrixXd u = r.rotation.unitary();
  EXPECT_NEAR((u.transpose() * u - Eigen::MatrixXd::Identity(ints.n_orb, ints.n_orb)).norm(), 0.0, 1e-10);
}

TEST(Relax, HartreeFockIsStationary) {
  const auto ints = read_fcidump(oracle::fixture("h2o_1.0"));
  RelaxOptions opt;
  opt.max_iterations = 4;
  const auto r = relax_orbitals({{CsfSpec::hf(), {}, "hf"}}, ints, opt);
  EXPECT_NEAR(r.energy, r.initial, 1e-8);
}

TEST(Bfgs, MinimizesRosenbrock) {
  auto f = [](const Eigen::VectorXd& x) { return std::pow(1 - x(0), 2) + 100 * std::pow(x(1) - x(0) * x(0), 2); };
  const auto r = bfgs_fd(f, Eigen::Vector2d(-1.2, 1.0), 500, 1e-16);
  EXPECT_NEAR(r.x(0), 1.0, 1e-4);
  EXPECT_NEAR(r.x(1), 1.0, 1e-4);
  EXPECT_LE(r.value, f(Eigen::Vector2d(-1.2, 1.0)));
}
