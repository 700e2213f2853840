#include "qsense/pipeline.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qsense/error.hpp"
#include "qsense/fermion.hpp"

namespace qsense {

std::string to_string(Method m) { return m == Method::VO ? "vo" : "pt"; }
std::string to_string(Mode m) { return m == Mode::Exact ? "exact" : "sampled"; }

Method method_from_string(const std::string& s) {
  if (s == "vo" || s == "VO") return Method::VO;
  if (s == "pt" || s == "PT") return Method::PT;
  throw InputError("unknown method '" + s + "' (expected vo or pt)");
}

Mode mode_from_string(const std::string& s) {
  if (s == "exact") return Mode::Exact;
  if (s == "sampled") return Mode::Sampled;
  throw InputError("unknown mode '" + s + "' (expected exact or sampled)");
}

void RunConfig::validate() const {
  if (fcidump_paths.empty()) throw InputError("no FCIDUMP input given");
  if (mode == Mode::Sampled && shots == 0) throw InputError("sampled mode needs at least one shot");
  if (mode == Mode::Sampled && !taper) throw InputError("the untapered ablation runs in exact mode only");
  if (active_occ == 0 || active_virt == 0) throw InputError("active window sizes must be positive");
}

// ---------------------------------------------------------------------------
// Config file

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

bool to_bool(const std::string& v, std::size_t line) {
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  throw ParseError(line, "expected a boolean, got '" + v + "'");
}

double to_double(const std::string& v, std::size_t line) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ParseError(line, "bad number '" + v + "'");
  }
  if (used != v.size()) throw ParseError(line, "bad number '" + v + "'");
  return x;
}

std::uint64_t to_count(const std::string& v, std::size_t line) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseError(line, "bad count '" + v + "'");
  }
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw ParseError(line, "count out of range '" + v + "'");
  }
}

}  // namespace

RunConfig parse_config(std::istream& in, RunConfig cfg) {
  std::string line;
  std::size_t no = 0;
  bool replaced_paths = false;
  while (std::getline(in, line)) {
    ++no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    try {
      if (key == "fcidump") {
        if (!replaced_paths) cfg.fcidump_paths.clear();
        replaced_paths = true;
        cfg.fcidump_paths.push_back(val);
      } else if (key == "method") {
        cfg.method = method_from_string(val);
      } else if (key == "mode") {
        cfg.mode = mode_from_string(val);
      } else if (key == "shots") {
        cfg.shots = to_count(val, no);
      } else if (key == "seed") {
        cfg.seed = to_count(val, no);
      } else if (key == "eps1") {
        cfg.eps1 = to_double(val, no);
      } else if (key == "eps2") {
        cfg.eps2 = to_double(val, no);
      } else if (key == "active_occ") {
        cfg.active_occ = to_count(val, no);
      } else if (key == "active_virt") {
        cfg.active_virt = to_count(val, no);
      } else if (key == "relax_orbitals") {
        cfg.relax_orbitals = to_bool(val, no);
      } else if (key == "constant_shift") {
        cfg.constant_shift = to_bool(val, no);
      } else if (key == "taper") {
        cfg.taper = to_bool(val, no);
      } else if (key == "fci") {
        cfg.fci = to_bool(val, no);
      } else if (key == "out") {
        cfg.out_dir = val;
      } else {
        throw ParseError(no, "unknown key '" + key + "'");
      }
    } catch (const InputError& e) {
      throw ParseError(no, e.what());
    }
  }
  return cfg;
}

RunConfig read_config(const std::string& path, RunConfig base) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open config " + path);
  RunConfig cfg = parse_config(f, std::move(base));
  // Relative inputs resolve against the config file's directory.
  const auto dir = std::filesystem::path(path).parent_path();
  for (auto& p : cfg.fcidump_paths)
    if (std::filesystem::path(p).is_relative()) p = (dir / p).lexically_normal().string();
  return cfg;
}

// ---------------------------------------------------------------------------
// Tapering statistics and the untapered ablation

TaperingStats tapering_stats(const std::vector<BasisState>& basis, SubspaceEvaluator& ev, const PauliSum& hq) {
  TaperingStats t;
  t.original_terms = hq.size();
  t.original_one_norm = one_norm(hq);
  const bool hq_const = std::abs(hq.constant()) > 0.0;
  std::vector<SeniorityConfig> cfg;
  for (const auto& b : basis) cfg.push_back(seniority_config(b, ev.n_orb()));
  std::size_t count = 0;
  for (std::size_t mu = 0; mu < basis.size(); ++mu)
    for (std::size_t nu = mu; nu < basis.size(); ++nu) {
      const PauliSum& op = ev.effective(cfg[mu], cfg[nu]).op;
      const bool off = mu != nu;
      const bool op_const = std::abs(op.constant()) > 0.0;
      const double terms = static_cast<double>(op.size() - (off && op_const ? 1 : 0));
      const double orig_terms = static_cast<double>(hq.size() - (off && hq_const ? 1 : 0));
      const double term_ratio = terms / orig_terms;
      const double norm_ratio = one_norm(op, off) / one_norm(hq, off);
      t.avg_term_ratio += term_ratio;
      t.avg_norm_ratio += norm_ratio;
      t.max_term_ratio = std::max(t.max_term_ratio, term_ratio);
      t.max_norm_ratio = std::max(t.max_norm_ratio, norm_ratio);
      ++count;
    }
  if (count > 0) {
    t.avg_term_ratio /= static_cast<double>(count);
    t.avg_norm_ratio /= static_cast<double>(count);
  }
  return t;
}

Eigen::MatrixXd untapered_matrix(const std::vector<BasisState>& basis, const PauliSum& hq, std::size_t n_orb,
                                 std::size_t n_elec) {
  const auto uc = build_clifford(n_orb);
  const Eigen::SparseMatrix<Complex> h = sparse_matrix(hq);
  std::vector<Eigen::VectorXcd> full;
  for (const auto& b : basis) {
    const StateVector s = untaper(seniority_config(b, n_orb), prepare_tapered(b, n_orb, n_elec), uc);
    full.emplace_back(Eigen::Map<const Eigen::VectorXcd>(s.amplitudes().data(), static_cast<Eigen::Index>(s.dim())));
  }
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index nu = 0; nu < n; ++nu) {
    const Eigen::VectorXcd hv = h * full[static_cast<std::size_t>(nu)];
    for (Eigen::Index mu = 0; mu <= nu; ++mu) m(mu, nu) = m(nu, mu) = full[static_cast<std::size_t>(mu)].dot(hv).real();
  }
  return m;
}

// ---------------------------------------------------------------------------
// One geometry

namespace {

std::optional<double> bond_from_name(const std::string& stem) {
  const auto us = stem.rfind('_');
  if (us == std::string::npos) return std::nullopt;
  const std::string tail = stem.substr(us + 1);
  std::size_t used = 0;
  try {
    const double v = std::stod(tail, &used);
    if (used == tail.size()) return v;
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

}  // namespace

GeometryResult run_geometry(const RunConfig& cfg, const std::string& path) {
  GeometryResult r;
  r.path = path;
  r.name = std::filesystem::path(path).stem().string();
  r.bond = bond_from_name(r.name);
  const FermionIntegrals ints = read_fcidump(path);
  r.n_orb = ints.n_orb;
  r.n_elec = ints.n_elec;
  r.e_hf = hf_energy(ints);
  const PauliSum hq = jordan_wigner(ints);
  r.hq_terms = hq.size();
  if (cfg.fci) {
    r.e_fci_sz0 = fci_oracle(hq, ints.n_elec, 0.0).energy;
    FciOptions singlet;
    singlet.singlet = true;
    r.e_fci = fci_oracle(hq, ints.n_elec, 0.0, singlet).energy;
  }

  SubspaceEvaluator ev(hq, ints.n_orb, ints.n_elec);
  SelectionParams params = SelectionParams::defaults(ints, cfg.active_occ, cfg.active_virt);
  params.eps1 = cfg.eps1;
  params.eps2 = cfg.eps2;
  Selection sel = cfg.method == Method::VO ? select_basis_vo(ints, ev, params) : select_basis_pt(ints, ev, params);
  r.trace = sel.trace;
  std::vector<BasisState> basis = std::move(sel.basis);
  if (cfg.method == Method::VO) {
    VoResult vo = vo_optimize(std::move(basis), ev);
    basis = std::move(vo.basis);
    r.vo_history = std::move(vo.history);
  }

  // Orbital relaxation swaps in the rotated Hamiltonian for the final build.
  FermionIntegrals final_ints = ints;
  PauliSum final_hq = hq;
  std::optional<SubspaceEvaluator> relaxed_ev;
  if (cfg.relax_orbitals) {
    r.relax = relax_orbitals(basis, ints);
    final_ints = rotate_orbitals(ints, r.relax->rotation);
    final_hq = jordan_wigner(final_ints);
    relaxed_ev.emplace(final_hq, ints.n_orb, ints.n_elec);
  }
  SubspaceEvaluator& fev = relaxed_ev ? *relaxed_ev : ev;

  std::optional<SamplingOptions> sampling;
  if (cfg.mode == Mode::Sampled) sampling = SamplingOptions{cfg.shots, cfg.seed, cfg.constant_shift};
  r.problem = build_subspace(basis, fev, sampling);
  if (!cfg.taper) {
    r.problem.hmat = untapered_matrix(basis, final_hq, ints.n_orb, ints.n_elec);
    const EigenPair gs = ground_state(r.problem.hmat);
    r.problem.e_min = gs.e_min;
    r.problem.c0 = gs.c0;
    for (auto& e : r.problem.elements) {
      e.exact = e.value = r.problem.hmat(static_cast<Eigen::Index>(e.mu), static_cast<Eigen::Index>(e.nu));
      e.terms = final_hq.size();
      e.one_norm = one_norm(final_hq);
    }
  }
  r.e_min = r.problem.e_min;
  r.cost = r.problem.cost ? *r.problem.cost : cost_report(basis, fev, cfg.constant_shift);
  r.resources = summarize_resources(basis, ints.n_orb, ints.n_elec);
  r.tapering = tapering_stats(basis, fev, final_hq);
  return r;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

nlohmann::json to_json(const RunConfig& cfg) {
  return {{"fcidump", cfg.fcidump_paths},
          {"method", to_string(cfg.method)},
          {"mode", to_string(cfg.mode)},
          {"shots", cfg.shots},
          {"seed", cfg.seed},
          {"eps1", cfg.eps1},
          {"eps2", cfg.eps2},
          {"active_occ", cfg.active_occ},
          {"active_virt", cfg.active_virt},
          {"relax_orbitals", cfg.relax_orbitals},
          {"constant_shift", cfg.constant_shift},
          {"taper", cfg.taper},
          {"fci", cfg.fci}};
}

nlohmann::json to_json(const GeometryResult& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["path"] = r.path;
  j["bond"] = opt(r.bond);
  j["n_orb"] = r.n_orb;
  j["n_elec"] = r.n_elec;
  j["hq_terms"] = r.hq_terms;
  j["e_hf"] = r.e_hf;
  j["e_fci"] = opt(r.e_fci);
  j["e_fci_sz0"] = opt(r.e_fci_sz0);
  j["e_min"] = r.e_min;
  j["error"] = r.e_fci ? nlohmann::json(r.e_min - *r.e_fci) : nlohmann::json(nullptr);
  nlohmann::json sel;
  sel["created"] = r.trace.created.size();
  sel["trimmed"] = r.trace.trimmed.size();
  sel["e_created"] = r.trace.e_created;
  sel["e_trimmed"] = r.trace.e_trimmed;
  std::vector<std::string> trimmed;
  for (const auto& c : r.trace.trimmed) trimmed.push_back(c.to_string());
  sel["trimmed_csfs"] = trimmed;
  sel["trimmed_weights"] = r.trace.trimmed_weights;
  j["selection"] = sel;
  nlohmann::json basis = nlohmann::json::array();
  for (const auto& b : r.problem.basis) {
    nlohmann::json rots = nlohmann::json::array();
    for (const auto& x : b.rotations) rots.push_back({{"target", x.target}, {"source", x.source}, {"theta", x.theta}});
    basis.push_back({{"label", b.label}, {"csf", b.csf.to_string()}, {"rotations", rots}});
  }
  j["basis"] = basis;
  j["c0"] = std::vector<double>(r.problem.c0.data(), r.problem.c0.data() + r.problem.c0.size());
  if (!r.vo_history.empty()) j["vo_history"] = r.vo_history;
  if (r.relax) {
    j["relax"] = {{"initial", r.relax->initial},
                  {"energy", r.relax->energy},
                  {"converged", r.relax->converged},
                  {"iterations", r.relax->history.size()}};
  }
  nlohmann::json elems = nlohmann::json::array();
  for (const auto& e : r.problem.elements) {
    elems.push_back({{"mu", e.mu},
                     {"nu", e.nu},
                     {"exact", e.exact},
                     {"value", e.value},
                     {"sigma", e.sigma},
                     {"shots", e.shots},
                     {"fragments", e.fragments},
                     {"terms", e.terms},
                     {"one_norm", e.one_norm},
                     {"classical", e.classical}});
  }
  j["elements"] = elems;
  j["cost_metric"] = r.cost.metric;
  j["resources"] = {{"n_states", r.resources.n_states},
                    {"avg_rotations", r.resources.avg_rotations},
                    {"max_rotations", r.resources.max_rotations},
                    {"avg_cnots", r.resources.avg_cnots},
                    {"max_cnots", r.resources.max_cnots},
                    {"avg_depth", r.resources.avg_depth},
                    {"max_depth", r.resources.max_depth}};
  j["tapering"] = {{"original_terms", r.tapering.original_terms},
                   {"original_one_norm", r.tapering.original_one_norm},
                   {"avg_term_ratio", r.tapering.avg_term_ratio},
                   {"max_term_ratio", r.tapering.max_term_ratio},
                   {"avg_norm_ratio", r.tapering.avg_norm_ratio},
                   {"max_norm_ratio", r.tapering.max_norm_ratio}};
  return j;
}

std::size_t run(const RunConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);
  const std::filesystem::path out(cfg.out_dir);
  std::ofstream csv(out / "results.csv");
  csv << "geometry,bond,method,mode,n_states,max_rotations,e_hf,e_fci,e_min,error,cost_metric,avg_cnots,max_cnots,"
         "avg_depth,max_depth,term_ratio,norm_ratio\n";
  nlohmann::json report;
  report["config"] = to_json(cfg);
  report["geometries"] = nlohmann::json::array();
  std::size_t failures = 0;
  for (const auto& path : cfg.fcidump_paths) {
    try {
      spdlog::info("{}: {} {} run", path, to_string(cfg.method), to_string(cfg.mode));
      const GeometryResult r = run_geometry(cfg, path);
      const std::string fci = r.e_fci ? fmt::format("{:.10f}", *r.e_fci) : "";
      const std::string err = r.e_fci ? fmt::format("{:.3e}", r.e_min - *r.e_fci) : "";
      const std::string bond = r.bond ? fmt::format("{}", *r.bond) : "";
      csv << fmt::format("{},{},{},{},{},{},{:.10f},{},{:.10f},{},{:.6g},{:.2f},{},{:.2f},{},{:.4f},{:.4f}\n", r.name,
                         bond, to_string(cfg.method), to_string(cfg.mode), r.problem.basis.size(),
                         r.resources.max_rotations, r.e_hf, fci, r.e_min, err, r.cost.metric, r.resources.avg_cnots,
                         r.resources.max_cnots, r.resources.avg_depth, r.resources.max_depth,
                         r.tapering.avg_term_ratio, r.tapering.avg_norm_ratio);
      std::ofstream bf(out / ("basis_" + r.name + ".txt"));
      write_basis(bf, r.problem.basis, r.n_orb, r.n_elec);
      report["geometries"].push_back(to_json(r));
      spdlog::info("{}: {} states, e_min {:.10f}{}", r.name, r.problem.basis.size(), r.e_min,
                   r.e_fci ? fmt::format(", error {:.3e} Ha", r.e_min - *r.e_fci) : "");
    } catch (const std::exception& e) {
      ++failures;
      spdlog::error("{}: {}", path, e.what());
    }
  }
  std::ofstream(out / "report.json") << report.dump(2) << "\n";
  return failures;
}

}  // namespace qsense
