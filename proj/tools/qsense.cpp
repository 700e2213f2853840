// Batch driver: basis selection, subspace build and reports for a set of
// FCIDUMP geometries.

#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <exception>
#include <string>
#include <vector>

#include "qsense/error.hpp"
#include "qsense/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qsense: seniority-symmetric subspace expansion on FCIDUMP inputs"};
  std::string config_path, method, mode, out, log_level = "info";
  std::size_t shots = 0, active_occ = 0, active_virt = 0;
  std::uint64_t seed = 0;
  double eps1 = 0.0, eps2 = 0.0;
  bool no_taper = false, relax = false, no_shift = false, no_fci = false;
  std::vector<std::string> inputs;

  app.add_option("--config", config_path, "flat key = value config file")->check(CLI::ExistingFile);
  auto* o_method = app.add_option("--method", method, "vo or pt")->check(CLI::IsMember({"vo", "pt"}));
  auto* o_mode = app.add_option("--mode", mode, "exact or sampled")->check(CLI::IsMember({"exact", "sampled"}));
  auto* o_shots = app.add_option("--shots", shots, "total shot budget in sampled mode");
  auto* o_seed = app.add_option("--seed", seed, "global seed");
  auto* o_out = app.add_option("--out", out, "output directory");
  auto* o_eps1 = app.add_option("--eps1", eps1, "trimming weight threshold");
  auto* o_eps2 = app.add_option("--eps2", eps2, "extension threshold in Hartree");
  auto* o_aocc = app.add_option("--active-occ", active_occ, "number of active occupied orbitals");
  auto* o_avirt = app.add_option("--active-virt", active_virt, "number of active virtual orbitals");
  app.add_flag("--no-taper", no_taper, "evaluate elements on the untapered register (ablation)");
  app.add_flag("--relax-orbitals", relax, "optimize a common orbital rotation");
  app.add_flag("--no-shift", no_shift, "disable the swap-test constant shift");
  app.add_flag("--no-fci", no_fci, "skip the FCI reference");
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error");
  app.add_option("fcidump", inputs, "FCIDUMP files (override the config list)");
  CLI11_PARSE(app, argc, argv);

  spdlog::set_level(spdlog::level::from_str(log_level));
  try {
    qsense::RunConfig cfg;
    if (!config_path.empty()) cfg = qsense::read_config(config_path);
    if (!inputs.empty()) cfg.fcidump_paths = inputs;
    if (*o_method) cfg.method = qsense::method_from_string(method);
    if (*o_mode) cfg.mode = qsense::mode_from_string(mode);
    if (*o_shots) cfg.shots = shots;
    if (*o_seed) cfg.seed = seed;
    if (*o_out) cfg.out_dir = out;
    if (*o_eps1) cfg.eps1 = eps1;
    if (*o_eps2) cfg.eps2 = eps2;
    if (*o_aocc) cfg.active_occ = active_occ;
    if (*o_avirt) cfg.active_virt = active_virt;
    if (no_taper) cfg.taper = false;
    if (relax) cfg.relax_orbitals = true;
    if (no_shift) cfg.constant_shift = false;
    if (no_fci) cfg.fci = false;
    cfg.validate();
    const std::size_t failures = qsense::run(cfg);
    if (failures == cfg.fcidump_paths.size()) {
      spdlog::error("every geometry failed");
      return 1;
    }
    if (failures > 0) spdlog::warn("{} of {} geometries failed", failures, cfg.fcidump_paths.size());
    return 0;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
}
