#include <gtest/gtest.h>

#include "qsense/resources.hpp"

using namespace qsense;

namespace {

BasisState bare(const CsfSpec& c) { return {c, {}, c.to_string()}; }

std::size_t sum_cnots(const ResourceEstimate& e) {
  std::size_t s = 0;
  for (const auto& i : e.breakdown) s += i.cnots;
  return s;
}

std::size_t sum_depth(const ResourceEstimate& e) {
  std::size_t s = 0;
  for (const auto& i : e.breakdown) s += i.depth;
  return s;
}

}  // namespace

TEST(Resources, HartreeFockPairOfWater) {
  const auto e = estimate_pair(bare(CsfSpec::hf()), bare(CsfSpec::hf()), 7, 10);
  EXPECT_EQ(e.cnots, 59U);
  EXPECT_EQ(e.depth, 5U + 5U + 84U);
}

TEST(Resources, OneRotationAddsTwoCnotsAndFiveDepth) {
  const BasisState hf = bare(CsfSpec::hf());
  BasisState rot = hf;
  rot.rotations.push_back({5, 4, 0.1});
  const auto a = estimate_pair(hf, hf, 7, 10);
  const auto b = estimate_pair(hf, rot, 7, 10);
  EXPECT_EQ(b.cnots, a.cnots + 2);
  EXPECT_EQ(b.depth, a.depth + 5);
}

TEST(Resources, ZeroElectronsLeavesSwapNetwork) {
  const auto e = estimate_pair(bare(CsfSpec::hf()), bare(CsfSpec::hf()), 3, 0);
  EXPECT_EQ(e.cnots, 21U);
  EXPECT_EQ(e.depth, 36U);
}

TEST(Resources, TotalsEqualBreakdown) {
  BasisState a = bare(CsfSpec::triplet_pair(0, 1, 2, 3));
  BasisState b = bare(CsfSpec::single(1, 4));
  b.rotations = {{5, 0, 0.1}, {6, 2, 0.2}};
  const auto e = estimate_pair(a, b, 7, 4);
  EXPECT_EQ(e.cnots, sum_cnots(e));
  EXPECT_EQ(e.depth, sum_depth(e));
}

TEST(Resources, SummaryOverOffDiagonalPairs) {
  BasisState rot = bare(CsfSpec::hf());
  rot.rotations = {{5, 4, 0.1}, {6, 4, 0.1}};
  const std::vector<BasisState> basis{rot, bare(CsfSpec::single(4, 5)), bare(CsfSpec::double_singlet(3, 4, 5, 6))};
  const auto s = summarize_resources(basis, 7, 10);
  EXPECT_EQ(s.n_states, 3U);
  EXPECT_EQ(s.max_rotations, 2U);
  const std::size_t c01 = 5 + 4 + 8 + 49, c02 = 5 + 4 + 11 + 49, c12 = 8 + 11 + 49;
  EXPECT_DOUBLE_EQ(s.avg_cnots, (c01 + c02 + c12) / 3.0);
  EXPECT_EQ(s.max_cnots, c02);
}
