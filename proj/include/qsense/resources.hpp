#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qsense/csf.hpp"

namespace qsense {

struct ResourceItem {
  std::string component;
  std::size_t cnots = 0;
  std::size_t depth = 0;
};

/// Analytic cost of the swap-test state preparation for one element. Depth
/// adds across components, so it is a serial upper bound.
struct ResourceEstimate {
  std::size_t cnots = 0;
  std::size_t depth = 0;
  std::vector<ResourceItem> breakdown;
};

/// Controlled preparation cost of one CSF on top of N_e/2 for the pairs.
ResourceItem controlled_csf_cost(const CsfSpec& csf, std::size_t n_elec);

ResourceEstimate estimate_pair(const BasisState& bra, const BasisState& ket, std::size_t n_orb,
                               std::size_t n_elec);

/// Off-diagonal averages and maxima over a basis.
struct ResourceSummary {
  std::size_t n_states = 0;
  double avg_rotations = 0.0;
  std::size_t max_rotations = 0;
  double avg_cnots = 0.0;
  std::size_t max_cnots = 0;
  double avg_depth = 0.0;
  std::size_t max_depth = 0;
};

ResourceSummary summarize_resources(const std::vector<BasisState>& basis, std::size_t n_orb, std::size_t n_elec);

}  // namespace qsense
