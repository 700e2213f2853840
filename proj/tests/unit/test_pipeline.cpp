#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qsense/error.hpp"
#include "qsense/pipeline.hpp"
#include "reference.hpp"

using namespace qsense;

namespace {

RunConfig parse(const std::string& text, RunConfig base = {}) {
  std::istringstream in(text);
  return parse_config(in, std::move(base));
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("qsense_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST(Config, ParsesEveryKey) {
  const auto cfg = parse(R"(# comment
fcidump = a.fcidump
fcidump = b.fcidump   # trailing
method = pt
mode = sampled
shots = 5000
seed = 9
eps1 = 1e-3
eps2 = 2e-6
active_occ = 4
active_virt = 2
relax_orbitals = true
constant_shift = false
taper = true
fci = false
out = results
)");
  EXPECT_EQ(cfg.fcidump_paths, (std::vector<std::string>{"a.fcidump", "b.fcidump"}));
  EXPECT_EQ(cfg.method, Method::PT);
  EXPECT_EQ(cfg.mode, Mode::Sampled);
  EXPECT_EQ(cfg.shots, 5000U);
  EXPECT_EQ(cfg.seed, 9U);
  EXPECT_DOUBLE_EQ(cfg.eps1, 1e-3);
  EXPECT_DOUBLE_EQ(cfg.eps2, 2e-6);
  EXPECT_EQ(cfg.active_occ, 4U);
  EXPECT_EQ(cfg.active_virt, 2U);
  EXPECT_TRUE(cfg.relax_orbitals);
  EXPECT_FALSE(cfg.constant_shift);
  EXPECT_FALSE(cfg.fci);
  EXPECT_EQ(cfg.out_dir, "results");
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, FileInputsReplaceBaseInputs) {
  RunConfig base;
  base.fcidump_paths = {"old"};
  base.seed = 3;
  const auto cfg = parse("fcidump = new\n", base);
  EXPECT_EQ(cfg.fcidump_paths, std::vector<std::string>{"new"});
  EXPECT_EQ(cfg.seed, 3U);
}

TEST(Config, RejectsMalformedLines) {
  EXPECT_THROW(parse("method vo\n"), ParseError);
  EXPECT_THROW(parse("colour = red\n"), ParseError);
  EXPECT_THROW(parse("method = dmrg\n"), ParseError);
  EXPECT_THROW(parse("shots = many\n"), ParseError);
  EXPECT_THROW(parse("taper = maybe\n"), ParseError);
}

TEST(Config, Validation) {
  RunConfig cfg;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg.fcidump_paths = {"x"};
  EXPECT_NO_THROW(cfg.validate());
  cfg.mode = Mode::Sampled;
  cfg.shots = 0;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg.shots = 10;
  cfg.taper = false;
  EXPECT_THROW(cfg.validate(), InputError);
}

TEST(Config, RelativeInputsResolveAgainstConfigDirectory) {
  const auto dir = scratch("config");
  std::filesystem::create_directories(dir / "sub");
  std::ofstream(dir / "sub" / "run.conf") << "fcidump = ../x.fcidump\n";
  const auto cfg = read_config((dir / "sub" / "run.conf").string());
  EXPECT_EQ(cfg.fcidump_paths.front(), (dir / "x.fcidump").lexically_normal().string());
}

TEST(Pipeline, HydrogenCurveIsExact) {
  RunConfig cfg;
  for (const char* bond : {"0.5", "0.7414", "1.5", "2.0"}) {
    const auto r = run_geometry(cfg, oracle::fixture(std::string("h2_") + bond));
    EXPECT_NEAR(r.e_min, *r.e_fci, 1e-8) << bond;
  }
}

TEST(Pipeline, UntaperedAblationMatchesEnergies) {
  RunConfig cfg;
  cfg.active_occ = 4;
  const auto path = oracle::fixture("h2o_1.0");
  const auto tapered = run_geometry(cfg, path);
  cfg.taper = false;
  const auto full = run_geometry(cfg, path);
  EXPECT_NEAR(tapered.e_min, full.e_min, 1e-10);
  EXPECT_LT((tapered.problem.hmat - full.problem.hmat).cwiseAbs().maxCoeff(), 1e-10);
  std::size_t tapered_terms = 0, full_terms = 0;
  for (const auto& e : tapered.problem.elements) tapered_terms += e.terms;
  for (const auto& e : full.problem.elements) full_terms += e.terms;
  EXPECT_GT(full_terms, tapered_terms);
}

TEST(Pipeline, SampledRunIsDeterministicPerSeed) {
  RunConfig cfg;
  cfg.active_occ = 4;
  cfg.mode = Mode::Sampled;
  cfg.shots = 100000;
  cfg.seed = 5;
  const auto path = oracle::fixture("h2o_1.0");
  const auto a = to_json(run_geometry(cfg, path)).dump();
  const auto b = to_json(run_geometry(cfg, path)).dump();
  EXPECT_EQ(a, b);
  cfg.seed = 6;
  EXPECT_NE(a, to_json(run_geometry(cfg, path)).dump());
}

TEST(Pipeline, RunWritesOutputs) {
  RunConfig cfg;
  cfg.fcidump_paths = {oracle::fixture("h2_0.7414"), "/nonexistent.fcidump"};
  cfg.out_dir = scratch("run").string();
  EXPECT_EQ(run(cfg), 1U);
  const auto csv = slurp(std::filesystem::path(cfg.out_dir) / "results.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "geometry,bond,method,mode,n_states,max_rotations,e_hf,e_fci,e_min,error,cost_metric,avg_cnots,"
            "max_cnots,avg_depth,max_depth,term_ratio,norm_ratio");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  const auto report = nlohmann::json::parse(slurp(std::filesystem::path(cfg.out_dir) / "report.json"));
  EXPECT_EQ(report.at("geometries").size(), 1U);
  EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(cfg.out_dir) / "basis_h2_0.7414.txt"));
}
