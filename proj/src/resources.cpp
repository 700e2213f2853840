#include "qsense/resources.hpp"

#include <algorithm>

namespace qsense {

ResourceItem controlled_csf_cost(const CsfSpec& csf, std::size_t n_elec) {
  const std::size_t base = n_elec / 2;
  switch (csf.kind) {
    case CsfKind::HF: return {"S0", base, base};
    case CsfKind::SingleSinglet: return {"S1", base + 3, base + 5};
    case CsfKind::DoubleSinglet: return {"S2", base + 6, base + 8};
    case CsfKind::TripletPair: return {"S3", base + 8, base + 9};
  }
  return {};
}

ResourceEstimate estimate_pair(const BasisState& bra, const BasisState& ket, std::size_t n_orb,
                               std::size_t n_elec) {
  ResourceEstimate r;
  for (const BasisState* s : {&bra, &ket}) {
    r.breakdown.push_back(controlled_csf_cost(s->csf, n_elec));
    if (!s->rotations.empty())
      r.breakdown.push_back({"rotations", 2 * s->rotations.size(), 5 * s->rotations.size()});
  }
  r.breakdown.push_back({"cswap", 7 * n_orb, 12 * n_orb});
  for (const auto& item : r.breakdown) {
    r.cnots += item.cnots;
    r.depth += item.depth;
  }
  return r;
}

ResourceSummary summarize_resources(const std::vector<BasisState>& basis, std::size_t n_orb, std::size_t n_elec) {
  ResourceSummary s;
  s.n_states = basis.size();
  for (const auto& b : basis) {
    s.avg_rotations += static_cast<double>(b.rotations.size());
    s.max_rotations = std::max(s.max_rotations, b.rotations.size());
  }
  if (!basis.empty()) s.avg_rotations /= static_cast<double>(basis.size());
  std::size_t pairs = 0;
  for (std::size_t mu = 0; mu < basis.size(); ++mu)
    for (std::size_t nu = mu + 1; nu < basis.size(); ++nu) {
      const auto e = estimate_pair(basis[mu], basis[nu], n_orb, n_elec);
      s.avg_cnots += static_cast<double>(e.cnots);
      s.avg_depth += static_cast<double>(e.depth);
      s.max_cnots = std::max(s.max_cnots, e.cnots);
      s.max_depth = std::max(s.max_depth, e.depth);
      ++pairs;
    }
  if (pairs > 0) {
    s.avg_cnots /= static_cast<double>(pairs);
    s.avg_depth /= static_cast<double>(pairs);
  }
  return s;
}

}  // namespace qsense
