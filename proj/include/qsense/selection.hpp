#pragma once

#include <cstddef>
#include <vector>

#include "qsense/csf.hpp"
#include "qsense/fermion.hpp"
#include "qsense/solver.hpp"

namespace qsense {

struct SelectionParams {
  std::vector<std::size_t> active_occ;
  std::vector<std::size_t> active_virt;
  double eps1 = 1e-4;  // trimming weight |c|^2
  double eps2 = 1e-5;  // extension threshold |dE| in Hartree
  /// VO only: the ordered extension list is applied this many times.
  std::size_t rotation_layers = 2;

  /// min(n_occ, n_active_occ) highest occupied and min(n_virt, n_active_virt)
  /// lowest virtual orbitals by Hartree-Fock orbital energy.
  static SelectionParams defaults(const FermionIntegrals& ints, std::size_t n_active_occ = 3,
                                  std::size_t n_active_virt = 3);

  /// Throws InputError for out-of-range, overlapping or misplaced active
  /// orbitals and thresholds outside eps1 in (0, 1], eps2 > 0.
  void validate(std::size_t n_orb, std::size_t n_occ) const;
};

/// One accepted (a, i) pair of an extension set.
struct ExtensionPair {
  std::size_t target = 0;  // a
  std::size_t source = 0;  // i
  double delta_e = 0.0;
  bool internal = false;   // both orbitals active
};

struct SelectionTrace {
  std::vector<CsfSpec> created;
  std::vector<CsfSpec> trimmed;
  std::vector<double> trimmed_weights;
  double e_created = 0.0;
  double e_trimmed = 0.0;
  /// Extension set per trimmed CSF, ordered by decreasing |dE|.
  std::vector<std::vector<ExtensionPair>> extension;
};

struct Selection {
  std::vector<BasisState> basis;
  SelectionTrace trace;
};

/// Creation, trimming and extension shared by both methods.
SelectionTrace select_csfs(const FermionIntegrals& ints, SubspaceEvaluator& ev, const SelectionParams& params);

/// Trimmed CSFs with rotation lists from their extension sets; angles start
/// at zero. CSFs sharing a seniority configuration share one rotation list so
/// the basis stays orthonormal under any common angles. Within a
/// configuration, CSFs that differ only in pair moves collapse onto the first
/// one, whose rotations cover those moves.
Selection select_basis_vo(const FermionIntegrals& ints, SubspaceEvaluator& ev, const SelectionParams& params);
Selection select_basis_vo(const FermionIntegrals& ints, const PauliSum& hq, const SelectionParams& params);

/// Trimmed CSFs plus their internal pair excitations, each carrying the
/// external pairs of its group as rotations at the MP2 angles.
Selection select_basis_pt(const FermionIntegrals& ints, SubspaceEvaluator& ev, const SelectionParams& params);
Selection select_basis_pt(const FermionIntegrals& ints, const PauliSum& hq, const SelectionParams& params);

}  // namespace qsense
