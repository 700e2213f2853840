#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qsense/resources.hpp"
#include "qsense/selection.hpp"
#include "qsense/solver.hpp"

namespace qsense {

enum class Method { VO, PT };
enum class Mode { Exact, Sampled };

std::string to_string(Method m);
std::string to_string(Mode m);
Method method_from_string(const std::string& s);
Mode mode_from_string(const std::string& s);

struct RunConfig {
  std::vector<std::string> fcidump_paths;
  Method method = Method::VO;
  Mode mode = Mode::Exact;
  std::size_t shots = 1000000;
  std::uint64_t seed = 0;
  double eps1 = 1e-4;
  double eps2 = 1e-5;
  std::size_t active_occ = 3;
  std::size_t active_virt = 3;
  bool relax_orbitals = false;
  bool constant_shift = true;
  bool taper = true;
  bool fci = true;
  std::string out_dir = "qsense-out";

  /// Throws InputError without inputs, with zero shots in sampled mode, or
  /// when the untapered ablation is combined with sampling.
  void validate() const;
};

/// Flat "key = value" lines; '#' starts a comment. `fcidump` may repeat.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig read_config(const std::string& path, RunConfig base = {});

/// Effective-operator size relative to the full qubit Hamiltonian over all
/// elements mu <= nu. Off-diagonal elements ignore the identity term on both
/// sides because it cannot contribute between orthogonal states.
struct TaperingStats {
  std::size_t original_terms = 0;
  double original_one_norm = 0.0;
  double avg_term_ratio = 0.0;
  double max_term_ratio = 0.0;
  double avg_norm_ratio = 0.0;
  double max_norm_ratio = 0.0;
};

TaperingStats tapering_stats(const std::vector<BasisState>& basis, SubspaceEvaluator& ev, const PauliSum& hq);

/// Subspace matrix from untapered states and the full qubit Hamiltonian.
Eigen::MatrixXd untapered_matrix(const std::vector<BasisState>& basis, const PauliSum& hq, std::size_t n_orb,
                                 std::size_t n_elec);

struct GeometryResult {
  std::string name;
  std::string path;
  std::optional<double> bond;
  std::size_t n_orb = 0;
  std::size_t n_elec = 0;
  std::size_t hq_terms = 0;
  double e_hf = 0.0;
  std::optional<double> e_fci;      // singlet
  std::optional<double> e_fci_sz0;  // any spin with S_z = 0
  double e_min = 0.0;
  SelectionTrace trace;
  SubspaceProblem problem;
  std::vector<double> vo_history;
  std::optional<RelaxResult> relax;
  CostReport cost;
  ResourceSummary resources;
  TaperingStats tapering;
};

/// Selection, optimization, subspace build, cost and resource reports for
/// one FCIDUMP.
GeometryResult run_geometry(const RunConfig& cfg, const std::string& path);

nlohmann::json to_json(const RunConfig& cfg);
nlohmann::json to_json(const GeometryResult& r);

/// Runs every geometry and writes results.csv, report.json and one
/// basis_<name>.txt per geometry into cfg.out_dir. Failed geometries are
/// logged and skipped. Returns the number of failures.
std::size_t run(const RunConfig& cfg);

}  // namespace qsense
