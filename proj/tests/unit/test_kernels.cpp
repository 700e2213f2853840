#include <gtest/gtest.h>

#include <random>

#include "dense.hpp"
#include "qsense/kernels.hpp"

using namespace qsense;
namespace k = qsense::kernels;

namespace {

std::vector<k::cplx> random_vec(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<k::cplx> v(dim);
  for (auto& a : v) a = {g(rng), g(rng)};
  return v;
}

}  // namespace

TEST(Kernels, ActiveTableIsOneOfTheKnown) {
  const auto& a = k::active();
  EXPECT_TRUE(a.name == "scalar" || a.name == "avx2");
}

TEST(Kernels, ScalarInnerMatchesDefinition) {
  std::mt19937_64 rng(1);
  const auto bra = random_vec(8, rng);
  const auto ket = random_vec(8, rng);
  k::cplx expect{};
  for (std::uint64_t i = 0; i < 8; ++i) {
    const double s = (std::popcount(i & 5U) & 1) ? -1.0 : 1.0;
    expect += std::conj(bra[i ^ 3U]) * s * ket[i];
  }
  const auto got = k::scalar::pauli_inner(bra, ket, 3, 5);
  EXPECT_NEAR(std::abs(got - expect), 0.0, 1e-13);
}

TEST(Kernels, Avx2MatchesScalar) {
  const k::KernelTable* v = k::avx2_table();
  if (v == nullptr) GTEST_SKIP() << "AVX2 variant unavailable on this host";
  std::mt19937_64 rng(2);
  for (std::size_t n = 1; n <= 9; ++n) {
    const std::size_t dim = std::size_t{1} << n;
    for (std::uint64_t x = 0; x < dim; x += 1 + dim / 7) {
      for (std::uint64_t z = 0; z < dim; z += 1 + dim / 5) {
        const auto bra = random_vec(dim, rng);
        const auto ket = random_vec(dim, rng);
        const auto a = k::scalar::pauli_inner(bra, ket, x, z);
        const auto b = v->pauli_inner(bra, ket, x, z);
        EXPECT_NEAR(std::abs(a - b), 0.0, 1e-12 * (1.0 + std::abs(a)));

        const k::cplx coeff{0.3, -1.7};
        auto out_s = random_vec(dim, rng);
        auto out_v = out_s;
        k::scalar::pauli_accumulate(out_s, ket, x, z, coeff);
        v->pauli_accumulate(out_v, ket, x, z, coeff);
        for (std::size_t i = 0; i < dim; ++i) EXPECT_NEAR(std::abs(out_s[i] - out_v[i]), 0.0, 1e-12);

        EXPECT_NEAR(k::scalar::norm_squared(bra), v->norm_squared(bra), 1e-11);
      }
    }
  }
}

TEST(Kernels, SingleAmplitudeFallsBackToScalar) {
  const k::KernelTable* v = k::avx2_table();
  if (v == nullptr) GTEST_SKIP() << "AVX2 variant unavailable on this host";
  std::vector<k::cplx> a{{0.6, 0.8}};
  EXPECT_NEAR(std::abs(v->pauli_inner(a, a, 0, 0) - k::cplx(1.0, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(v->norm_squared(a), 1.0, 1e-15);
}
