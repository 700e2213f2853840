#include <gtest/gtest.h>

#include <random>

#include "dense.hpp"
#include "qsense/error.hpp"
#include "qsense/pauli.hpp"

using namespace qsense;
using qsense::oracle::dense;

namespace {

PauliProduct P(std::size_t n, std::initializer_list<std::pair<std::size_t, Pauli>> ops) {
  return PauliProduct::from_ops(n, ops);
}

}  // namespace

TEST(PauliProduct, SingleQubitTable) {
  const auto r = P(1, {{0, Pauli::X}}) * P(1, {{0, Pauli::Y}});
  EXPECT_EQ(r.key(), P(1, {{0, Pauli::Z}}).key());
  EXPECT_EQ(r.phase(), 1);
}

TEST(PauliProduct, Involution) {
  const auto zz = P(2, {{0, Pauli::Z}, {1, Pauli::Z}});
  const auto r = zz * zz;
  EXPECT_TRUE(r.is_identity());
  EXPECT_EQ(r.phase(), 0);
}

TEST(PauliProduct, TwoQubitProductMatchesMatrices) {
  const auto a = P(2, {{0, Pauli::X}, {1, Pauli::Z}});
  const auto b = P(2, {{0, Pauli::Z}, {1, Pauli::X}});
  const auto r = a * b;
  EXPECT_EQ(r.key(), P(2, {{0, Pauli::Y}, {1, Pauli::Y}}).key());
  EXPECT_EQ(r.phase(), 0);
  EXPECT_TRUE(dense(r).isApprox(dense(a) * dense(b)));
}

TEST(PauliProduct, DimensionMismatchThrows) {
  EXPECT_THROW(PauliProduct(2) * PauliProduct(3), InputError);
  EXPECT_THROW(commutes(PauliProduct(2), PauliProduct(3)), InputError);
}

TEST(PauliProduct, Commutation) {
  EXPECT_TRUE(commutes(P(2, {{0, Pauli::Z}}), P(2, {{0, Pauli::Z}, {1, Pauli::Z}})));
  EXPECT_FALSE(commutes(P(1, {{0, Pauli::X}}), P(1, {{0, Pauli::Z}})));
  const auto a = P(2, {{0, Pauli::X}, {1, Pauli::Y}});
  const auto b = P(2, {{0, Pauli::Y}, {1, Pauli::X}});
  EXPECT_TRUE(commutes(a, b));
  EXPECT_NEAR((dense(a) * dense(b) - dense(b) * dense(a)).norm(), 0.0, 1e-14);
}

TEST(PauliProduct, RandomProductsMatchDenseOracle) {
  std::mt19937_64 rng(7);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 60; ++trial) {
      const auto a = oracle::random_product(n, rng);
      const auto b = oracle::random_product(n, rng);
      const auto c = oracle::random_product(n, rng);
      EXPECT_TRUE(dense(a * b).isApprox(dense(a) * dense(b)));
      EXPECT_EQ((a * b) * c, a * (b * c));
      const oracle::CMat ab = dense(a) * dense(b);
      const bool oracle = (ab - dense(b) * dense(a)).norm() < 1e-12;
      EXPECT_EQ(commutes(a, b), oracle);
    }
  }
}

TEST(PauliProduct, SquareIsSignedIdentity) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = oracle::random_product(4, rng);
    const auto sq = a * a;
    EXPECT_TRUE(sq.is_identity());
    EXPECT_EQ(sq.phase(), a.phase() % 2 == 0 ? 0 : 2);
  }
}

TEST(PauliProduct, WideRegisterUsesSecondWord) {
  const auto a = P(100, {{3, Pauli::X}, {90, Pauli::Z}});
  const auto b = P(100, {{90, Pauli::X}});
  EXPECT_FALSE(commutes(a, b));
  const auto r = a * b;
  EXPECT_EQ(r.op(90), Pauli::Y);
  EXPECT_EQ(r.op(3), Pauli::X);
  EXPECT_EQ(r.phase(), 1);  // Z X = iY
}

TEST(CliffordMap, CnotOnZZ) {
  CliffordMap c(2);
  c.cnot(0, 1);
  const auto zz = P(2, {{0, Pauli::Z}, {1, Pauli::Z}});
  const auto r = conjugate(zz, c);
  EXPECT_EQ(r.key(), P(2, {{1, Pauli::Z}}).key());
  EXPECT_EQ(r.phase(), 0);
}

TEST(CliffordMap, CnotOnX) {
  CliffordMap c(2);
  c.cnot(0, 1);
  const auto r = conjugate(P(2, {{0, Pauli::X}}), c);
  EXPECT_EQ(r.key(), P(2, {{0, Pauli::X}, {1, Pauli::X}}).key());
  EXPECT_EQ(r.phase(), 0);
}

TEST(CliffordMap, PermutationFixesIdentity) {
  CliffordMap c(3);
  c.permute({2, 0, 1});
  const auto r = conjugate(PauliProduct(3), c);
  EXPECT_TRUE(r.is_identity());
  EXPECT_EQ(r.phase(), 0);
}

TEST(CliffordMap, RejectsBadIndices) {
  CliffordMap c(2);
  EXPECT_THROW(c.cnot(0, 2), InputError);
  EXPECT_THROW(c.cnot(1, 1), InputError);
  EXPECT_THROW(c.permute({0, 0}), InputError);
  EXPECT_THROW(c.permute({0}), InputError);
}

TEST(CliffordMap, ConjugationMatchesUnitaryOracle) {
  // Dense unitary of a random CNOT/permutation circuit on 3 qubits.
  std::mt19937_64 rng(3);
  const std::size_t n = 3;
  const Eigen::Index dim = 8;
  for (int trial = 0; trial < 20; ++trial) {
    CliffordMap c(n);
    oracle::CMat u = oracle::CMat::Identity(dim, dim);
    for (int g = 0; g < 5; ++g) {
      oracle::CMat step = oracle::CMat::Zero(dim, dim);
      if (rng() % 3 != 0) {
        const std::size_t ctl = rng() % n;
        std::size_t tgt = rng() % n;
        if (tgt == ctl) tgt = (tgt + 1) % n;
        c.cnot(ctl, tgt);
        for (Eigen::Index k = 0; k < dim; ++k) {
          const Eigen::Index out = ((k >> ctl) & 1) ? (k ^ (Eigen::Index{1} << tgt)) : k;
          step(out, k) = 1.0;
        }
      } else {
        std::vector<std::size_t> dest{0, 1, 2};
        std::shuffle(dest.begin(), dest.end(), rng);
        c.permute(dest);
        for (Eigen::Index k = 0; k < dim; ++k) {
          Eigen::Index out = 0;
          for (std::size_t q = 0; q < n; ++q) out |= ((k >> q) & 1) << dest[q];
          step(out, k) = 1.0;
        }
      }
      u = step * u;
    }
    for (int t = 0; t < 10; ++t) {
      auto p = oracle::random_product(n, rng);
      p.set_phase(rng() % 2 == 0 ? 0 : 2);
      const auto r = conjugate(p, c);
      EXPECT_TRUE(dense(r).isApprox(u * dense(p) * u.adjoint()));
      EXPECT_EQ(r.phase() % 2, 0);
      const auto back = conjugate(r, c.inverse());
      EXPECT_EQ(back, p);
      const auto q = oracle::random_product(n, rng);
      EXPECT_EQ(commutes(p, q), commutes(r, conjugate(q, c)));
    }
  }
}

TEST(PauliSum, OneNorm) {
  PauliSum s(2);
  s.add(P(2, {{0, Pauli::Z}}), 0.5);
  s.add(P(2, {{1, Pauli::X}}), 0.25);
  EXPECT_DOUBLE_EQ(one_norm(s), 0.75);
  EXPECT_DOUBLE_EQ(one_norm(PauliSum(3)), 0.0);
  s.add(PauliProduct(2), -2.0);
  EXPECT_DOUBLE_EQ(one_norm(s), 2.75);
  EXPECT_DOUBLE_EQ(one_norm(s, true), 0.75);
}

TEST(PauliSum, MergeAndDrop) {
  PauliSum s(1);
  s.add(P(1, {{0, Pauli::Z}}), 0.5);
  s.add(P(1, {{0, Pauli::Z}}), 0.5);
  ASSERT_EQ(s.size(), 1U);
  EXPECT_DOUBLE_EQ(s.coefficient(P(1, {{0, Pauli::Z}}).key()).real(), 1.0);

  PauliSum raw(1, 0.0);
  raw.add(P(1, {{0, Pauli::X}}), 1e-14);
  EXPECT_EQ(raw.size(), 1U);
  EXPECT_TRUE(simplify(raw, 1e-12).empty());
}

TEST(PauliSum, ProductAbsorbsPhase) {
  // (X0) * (Y0) = i Z0
  const auto s = PauliSum::from_product(P(1, {{0, Pauli::X}})) *
                 PauliSum::from_product(P(1, {{0, Pauli::Y}}));
  ASSERT_EQ(s.size(), 1U);
  const Complex c = s.coefficient(P(1, {{0, Pauli::Z}}).key());
  EXPECT_NEAR(c.real(), 0.0, 1e-15);
  EXPECT_NEAR(c.imag(), 1.0, 1e-15);
}

TEST(PauliSum, RandomSumAlgebraMatchesDense) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  auto random_sum = [&](std::size_t n) {
    PauliSum s(n);
    for (int i = 0; i < 6; ++i) s.add(oracle::random_product(n, rng), Complex(g(rng), g(rng)));
    return s;
  };
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_sum(3);
    const auto b = random_sum(3);
    EXPECT_TRUE(dense(a * b).isApprox(dense(a) * dense(b)));
    EXPECT_TRUE(dense(a + b).isApprox(dense(a) + dense(b)));
    EXPECT_TRUE(dense(commutator(a, b)).isApprox(dense(a) * dense(b) - dense(b) * dense(a)));
    EXPECT_TRUE(dense(a.adjoint()).isApprox(dense(a).adjoint()));
    EXPECT_TRUE((a + a.adjoint()).is_hermitian());
  }
}

TEST(PauliSum, ConjugationMatchesTermwise) {
  CliffordMap c(3);
  c.cnot(1, 0).permute({1, 2, 0}).cnot(2, 1);
  PauliSum s(3);
  s.add(P(3, {{0, Pauli::Y}, {1, Pauli::X}}), 0.3);
  s.add(P(3, {{2, Pauli::Z}}), -1.1);
  const auto t = conjugate(s, c);
  EXPECT_EQ(t.size(), 2U);
  EXPECT_NEAR(one_norm(t), one_norm(s), 1e-15);
  const auto back = conjugate(t, c.inverse());
  EXPECT_NEAR(one_norm(back - s), 0.0, 1e-15);
}

TEST(PauliSum, TextRoundTrip) {
  PauliSum s(6);
  s.add(P(6, {{0, Pauli::X}, {3, Pauli::Z}, {5, Pauli::Y}}), -0.125);
  s.add(PauliProduct(6), 1.5);
  s.add(P(6, {{2, Pauli::Y}}), Complex(0.25, -0.75));
  const std::string text = s.to_string();
  const auto parsed = PauliSum::parse(text, 6);
  EXPECT_EQ(parsed.terms(), s.terms());
  EXPECT_NE(text.find("* X0 Z3 Y5"), std::string::npos);
}

TEST(PauliSum, ParseRejectsGarbage) {
  EXPECT_THROW(PauliSum::parse("0.5 * Q0", 2), ParseError);
  EXPECT_THROW(PauliSum::parse("0.5 * X7", 2), ParseError);
  EXPECT_THROW(PauliSum::parse("abc * X0", 2), ParseError);
}
