#include "qsense/selection.hpp"

#include <spdlog/spdlog.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "qsense/error.hpp"

namespace qsense {

SelectionParams SelectionParams::defaults(const FermionIntegrals& ints, std::size_t n_active_occ,
                                          std::size_t n_active_virt) {
  const auto eps = orbital_energies(ints);
  const std::size_t n_occ = ints.n_occ();
  std::vector<std::size_t> occ(n_occ), virt(ints.n_orb - n_occ);
  std::iota(occ.begin(), occ.end(), std::size_t{0});
  std::iota(virt.begin(), virt.end(), n_occ);
  std::stable_sort(occ.begin(), occ.end(), [&](std::size_t a, std::size_t b) { return eps[a] > eps[b]; });
  std::stable_sort(virt.begin(), virt.end(), [&](std::size_t a, std::size_t b) { return eps[a] < eps[b]; });
  occ.resize(std::min(occ.size(), n_active_occ));
  virt.resize(std::min(virt.size(), n_active_virt));
  std::sort(occ.begin(), occ.end());
  std::sort(virt.begin(), virt.end());
  SelectionParams p;
  p.active_occ = std::move(occ);
  p.active_virt = std::move(virt);
  return p;
}

void SelectionParams::validate(std::size_t n_orb, std::size_t n_occ) const {
  if (active_occ.empty() || active_virt.empty()) throw InputError("active orbital sets must be nonempty");
  for (std::size_t i : active_occ)
    if (i >= n_occ) throw InputError("active occupied orbital " + std::to_string(i) + " is not occupied");
  for (std::size_t a : active_virt)
    if (a < n_occ || a >= n_orb) throw InputError("active virtual orbital " + std::to_string(a) + " is not virtual");
  if (std::set<std::size_t>(active_occ.begin(), active_occ.end()).size() != active_occ.size() ||
      std::set<std::size_t>(active_virt.begin(), active_virt.end()).size() != active_virt.size()) {
    throw InputError("active orbital sets contain duplicates");
  }
  if (!(eps1 > 0.0 && eps1 <= 1.0)) throw InputError("eps1 must lie in (0, 1]");
  if (!(eps2 > 0.0)) throw InputError("eps2 must be positive");
  if (rotation_layers == 0) throw InputError("rotation_layers must be at least 1");
}

namespace {

std::vector<BasisState> bare(const std::vector<CsfSpec>& csfs) {
  std::vector<BasisState> out;
  for (const auto& c : csfs) out.push_back({c, {}, c.to_string()});
  return out;
}

double lowest(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

bool contains(const std::vector<std::size_t>& v, std::size_t x) { return std::find(v.begin(), v.end(), x) != v.end(); }

CsfSpec with_move(CsfSpec c, std::size_t target, std::size_t source) {
  c.pair_moves.push_back({target, source});
  std::sort(c.pair_moves.begin(), c.pair_moves.end());
  return c;
}

}  // namespace

SelectionTrace select_csfs(const FermionIntegrals& ints, SubspaceEvaluator& ev, const SelectionParams& params) {
  const std::size_t n = ints.n_orb, n_occ = ints.n_occ();
  params.validate(n, n_occ);
  SelectionTrace t;

  // Creation
  t.created.push_back(CsfSpec::hf());
  for (std::size_t i : params.active_occ)
    for (std::size_t a : params.active_virt) t.created.push_back(CsfSpec::single(i, a));
  for (std::size_t x = 0; x < params.active_occ.size(); ++x)
    for (std::size_t y = x + 1; y < params.active_occ.size(); ++y)
      for (std::size_t u = 0; u < params.active_virt.size(); ++u)
        for (std::size_t w = u + 1; w < params.active_virt.size(); ++w) {
          const std::size_t i = params.active_occ[x], j = params.active_occ[y];
          const std::size_t a = params.active_virt[u], b = params.active_virt[w];
          t.created.push_back(CsfSpec::double_singlet(i, j, a, b));
          t.created.push_back(CsfSpec::triplet_pair(i, j, a, b));
        }
  // Repeated hole or particle: two unpaired electrons both above or both
  // below the Fermi level. Repeating both gives a pair excitation.
  for (std::size_t i : params.active_occ)
    for (std::size_t a : params.active_virt) t.created.push_back(with_move(CsfSpec::hf(), a, i));
  for (std::size_t i : params.active_occ)
    for (std::size_t u = 0; u < params.active_virt.size(); ++u)
      for (std::size_t w = u + 1; w < params.active_virt.size(); ++w)
        t.created.push_back(CsfSpec::double_singlet(i, i, params.active_virt[u], params.active_virt[w]));
  for (std::size_t x = 0; x < params.active_occ.size(); ++x)
    for (std::size_t y = x + 1; y < params.active_occ.size(); ++y)
      for (std::size_t a : params.active_virt)
        t.created.push_back(CsfSpec::double_singlet(params.active_occ[x], params.active_occ[y], a, a));

  // Trimming; the dominant CSF always survives.
  {
    const auto states = ev.prepare(bare(t.created));
    const EigenPair gs = ground_state(ev.matrix(states));
    t.e_created = gs.e_min;
    Eigen::Index dominant = 0;
    gs.c0.cwiseAbs().maxCoeff(&dominant);
    for (Eigen::Index k = 0; k < gs.c0.size(); ++k) {
      const double w = gs.c0(k) * gs.c0(k);
      if (w > params.eps1 || k == dominant) {
        t.trimmed.push_back(t.created[static_cast<std::size_t>(k)]);
        t.trimmed_weights.push_back(w);
      }
    }
  }
  if (t.trimmed.empty()) throw SelectionError("no CSF survived trimming; lower eps1");

  // Extension
  const auto states = ev.prepare(bare(t.trimmed));
  const Eigen::MatrixXd h = ev.matrix(states);
  t.e_trimmed = lowest(h);
  const auto nb = static_cast<Eigen::Index>(states.size());
  for (const CsfSpec& mu : t.trimmed) {
    std::vector<ExtensionPair> set;
    const auto paired = mu.paired(n_occ);
    const auto unpaired = mu.unpaired();
    for (std::size_t i = 0; i < n_occ; ++i) {
      if (!contains(paired, i)) continue;
      for (std::size_t a = n_occ; a < n; ++a) {
        if (contains(paired, a) || contains(unpaired, a)) continue;
        PreparedState cand = ev.prepare(BasisState{with_move(mu, a, i), {}, ""});
        // Orthogonalize against trimmed states of the same configuration.
        std::vector<Complex> amps(cand.state.amplitudes().begin(), cand.state.amplitudes().end());
        for (const auto& s : states) {
          if (s.config != cand.config) continue;
          const Complex ov = inner(s.state, cand.state);
          for (std::size_t k = 0; k < amps.size(); ++k) amps[k] -= ov * s.state[k];
        }
        StateVector orth(cand.state.n_qubits(), std::move(amps));
        if (orth.norm() < 1e-8) continue;
        orth.normalize();
        cand.state = std::move(orth);
        Eigen::MatrixXd big(nb + 1, nb + 1);
        big.topLeftCorner(nb, nb) = h;
        for (Eigen::Index k = 0; k < nb; ++k) big(nb, k) = big(k, nb) = ev.element(cand, states[static_cast<std::size_t>(k)]);
        big(nb, nb) = ev.element(cand, cand);
        const double de = lowest(big) - t.e_trimmed;
        if (std::abs(de) > params.eps2) {
          const bool internal = contains(params.active_occ, i) && contains(params.active_virt, a);
          set.push_back({a, i, de, internal});
        }
      }
    }
    std::stable_sort(set.begin(), set.end(),
                     [](const ExtensionPair& x, const ExtensionPair& y) { return std::abs(x.delta_e) > std::abs(y.delta_e); });
    t.extension.push_back(std::move(set));
  }
  return t;
}

namespace {

struct Group {
  std::vector<std::size_t> members;  // indices into trace.trimmed
  std::vector<ExtensionPair> pairs;  // union, ordered by decreasing max |dE|
};

// Trimmed CSFs grouped by seniority configuration, in first-seen order.
std::vector<Group> group_by_config(const SelectionTrace& t, std::size_t n_orb, bool external_only) {
  std::vector<Group> groups;
  std::map<std::uint64_t, std::size_t> index;
  for (std::size_t mu = 0; mu < t.trimmed.size(); ++mu) {
    const std::uint64_t bits = seniority_config(t.trimmed[mu], n_orb).bits;
    auto [it, fresh] = index.emplace(bits, groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].members.push_back(mu);
  }
  for (auto& g : groups) {
    std::map<std::pair<std::size_t, std::size_t>, ExtensionPair> merged;
    for (std::size_t mu : g.members)
      for (const auto& p : t.extension[mu]) {
        if (external_only && p.internal) continue;
        auto [it, fresh] = merged.emplace(std::make_pair(p.target, p.source), p);
        if (!fresh && std::abs(p.delta_e) > std::abs(it->second.delta_e)) it->second = p;
      }
    for (const auto& [k, p] : merged) g.pairs.push_back(p);
    std::stable_sort(g.pairs.begin(), g.pairs.end(), [](const ExtensionPair& x, const ExtensionPair& y) {
      return std::abs(x.delta_e) > std::abs(y.delta_e);
    });
  }
  return groups;
}

}  // namespace

Selection select_basis_vo(const FermionIntegrals& ints, SubspaceEvaluator& ev, const SelectionParams& params) {
  Selection out;
  out.trace = select_csfs(ints, ev, params);
  const auto groups = group_by_config(out.trace, ints.n_orb, false);
  for (const auto& g : groups) {
    std::vector<PairRotation> layer;
    for (const auto& p : g.pairs) layer.push_back({p.target, p.source, 0.0});
    // Members differing only in pair moves are folded into the first one;
    // the rotations reach their occupations.
    std::vector<CsfSpec> kept;
    for (std::size_t mu : g.members) {
      CsfSpec bare = out.trace.trimmed[mu];
      const auto moves = bare.pair_moves;
      bare.pair_moves.clear();
      const bool folded = std::any_of(kept.begin(), kept.end(), [&](const CsfSpec& k) {
        CsfSpec kb = k;
        kb.pair_moves.clear();
        return kb == bare;
      });
      if (folded) {
        for (const auto& m : moves) {
          const bool present = std::any_of(layer.begin(), layer.end(), [&](const PairRotation& r) {
            return r.target == m.target && r.source == m.source;
          });
          if (!present) layer.push_back({m.target, m.source, 0.0});
        }
        continue;
      }
      kept.push_back(out.trace.trimmed[mu]);
    }
    std::vector<PairRotation> rots;
    for (std::size_t l = 0; l < params.rotation_layers; ++l) rots.insert(rots.end(), layer.begin(), layer.end());
    for (const auto& c : kept) out.basis.push_back({c, rots, c.to_string()});
  }
  return out;
}

Selection select_basis_pt(const FermionIntegrals& ints, SubspaceEvaluator& ev, const SelectionParams& params) {
  Selection out;
  out.trace = select_csfs(ints, ev, params);
  const auto groups = group_by_config(out.trace, ints.n_orb, true);
  std::set<std::pair<CsfSpec, std::vector<std::tuple<std::size_t, std::size_t, double>>>> seen;
  for (const auto& g : groups) {
    std::vector<PairRotation> rots;
    for (const auto& p : g.pairs) {
      const auto t = mp2_pair_amplitude(ints, p.source, p.target);
      if (!t) continue;
      rots.push_back({p.target, p.source, *t});
    }
    std::vector<std::tuple<std::size_t, std::size_t, double>> key_rots;
    for (const auto& r : rots) key_rots.emplace_back(r.target, r.source, r.theta);
    std::sort(key_rots.begin(), key_rots.end());
    std::vector<PreparedState> kept;
    auto add = [&](const CsfSpec& c) {
      if (!seen.emplace(c, key_rots).second) return;
      // A doubly filled particle orbital and a pair move can spell the same
      // occupation twice.
      BasisState b{c, rots, c.to_string()};
      PreparedState p = ev.prepare(b);
      for (const auto& k : kept)
        if (k.config == p.config && std::abs(inner(k.state, p.state)) > 1e-8) return;
      kept.push_back(std::move(p));
      out.basis.push_back(std::move(b));
    };
    for (std::size_t mu : g.members) {
      const CsfSpec& c = out.trace.trimmed[mu];
      add(c);
      for (const auto& p : out.trace.extension[mu])
        if (p.internal) add(with_move(c, p.target, p.source));
    }
  }
  return out;
}

Selection select_basis_vo(const FermionIntegrals& ints, const PauliSum& hq, const SelectionParams& params) {
  SubspaceEvaluator ev(hq, ints.n_orb, ints.n_elec);
  return select_basis_vo(ints, ev, params);
}

Selection select_basis_pt(const FermionIntegrals& ints, const PauliSum& hq, const SelectionParams& params) {
  SubspaceEvaluator ev(hq, ints.n_orb, ints.n_elec);
  return select_basis_pt(ints, ev, params);
}

}  // namespace qsense
