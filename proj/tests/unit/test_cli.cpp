#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ladder/app/commands.hpp"
#include "ladder/app/config.hpp"
#include "ladder/app/spectra_cache.hpp"

namespace fs = std::filesystem;
using namespace ladder;
using namespace ladder::app;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ladder");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ladder_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST(Config, ParseSizes) {
  EXPECT_EQ(parse_sizes("8"), (std::vector<int>{8}));
  EXPECT_EQ(parse_sizes("4-7"), (std::vector<int>{4, 5, 6, 7}));
  EXPECT_EQ(parse_sizes("4-12:2"), (std::vector<int>{4, 6, 8, 10, 12}));
  EXPECT_EQ(parse_sizes("4, 6,8"), (std::vector<int>{4, 6, 8}));
  EXPECT_THROW(parse_sizes("x"), ConfigError);
  EXPECT_THROW(parse_sizes("8-4"), ConfigError);
}

TEST(Config, PrecedenceAndValidation) {
  const Settings file{{"Jpar", "1.0"}, {"hstep", "0.5"}, {"L", "6"}};
  const Settings env{{"Jpar", "2.0"}, {"seed", "9"}};
  const Settings flags{{"Jpar", "3.0"}};
  const auto c = resolve(file, env, flags);
  EXPECT_EQ(c.j_par, 3.0);
  EXPECT_EQ(c.h_step, 0.5);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.sizes, (std::vector<int>{6}));
  EXPECT_EQ(c.j_perp, 13.0);
  EXPECT_EQ(c.delta, 1e-3);
  EXPECT_THROW(resolve({}, {}, {{"hstep", "0"}}), ConfigError);
  EXPECT_THROW(resolve({}, {}, {{"delta", "-1"}}), ConfigError);
  EXPECT_THROW(resolve({}, {}, {{"L", "1"}}), ConfigError);
  EXPECT_THROW(resolve({}, {}, {{"tol", "abc"}}), ConfigError);
}

TEST(Config, FieldGridHitsEndpoint) {
  auto c = resolve({}, {}, {{"hmin", "0"}, {"hmax", "1"}, {"hstep", "0.1"}});
  const auto grid = c.field_grid();
  ASSERT_EQ(grid.size(), 11u);
  EXPECT_DOUBLE_EQ(grid.back(), 1.0);
}

TEST_F(Cli, ConfigFileAndEnvironment) {
  const auto cfg = dir_ / "run.cfg";
  std::ofstream(cfg) << "# decoupled rungs\nJpar = 0.5\nL = 4\n";
  EXPECT_EQ(read_config_file(cfg).at("Jpar"), "0.5");
  std::ofstream(dir_ / "bad.cfg") << "nonsense = 1\n";
  EXPECT_THROW(read_config_file(dir_ / "bad.cfg"), ConfigError);

  ::setenv("LADDER_JPAR", "0", 1);
  const auto r = run({"gap", "--config", cfg.string(), "--out", dir_.string()});
  ::unsetenv("LADDER_JPAR");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = lines_of(dir_ / "gap.csv");
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[1], "4,13");
}

TEST_F(Cli, GapDecoupledRungs) {
  const auto r = run({"gap", "--L", "4", "--Jpar", "0", "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = lines_of(dir_ / "gap.csv");
  EXPECT_EQ(lines[0], "L,Delta_L");
  EXPECT_EQ(lines[1], "4,13");
  EXPECT_TRUE(fs::exists(dir_ / "gap.gp"));
}

TEST_F(Cli, SweepSaturationAndFidelity) {
  const auto r = run({"sweep", "--L", "8", "--hstep", "0.05", "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto crossings = lines_of(dir_ / "crossings_L8.csv");
  EXPECT_EQ(crossings[0], "L,index,H,Sz_from,Sz_to");
  std::stringstream last(crossings.back());
  std::string cell;
  std::vector<std::string> cells;
  while (std::getline(last, cell, ',')) cells.push_back(cell);
  EXPECT_NEAR(std::stod(cells[2]), 15.3, 1e-9);
  EXPECT_EQ(cells[4], "8");

  const auto sweep = lines_of(dir_ / "sweep_L8.csv");
  EXPECT_EQ(sweep[0], "H,sector,m,E0,F_global");
  EXPECT_EQ(sweep.size(), 322u);
  EXPECT_TRUE(fs::exists(dir_ / "sweep_L8.gp"));
}

TEST_F(Cli, DeterministicAndCached) {
  ASSERT_EQ(run({"sweep", "--L", "5", "--hstep", "0.25", "--out", dir_.string()}).code, 0);
  const auto first = slurp(dir_ / "sweep_L5.csv");
  std::size_t cached = 0;
  for (const auto& e : fs::directory_iterator(dir_ / ".cache")) cached += e.path().extension() == ".spec";
  EXPECT_EQ(cached, 1u);
  ASSERT_EQ(run({"sweep", "--L", "5", "--hstep", "0.25", "--out", dir_.string()}).code, 0);
  EXPECT_EQ(slurp(dir_ / "sweep_L5.csv"), first);
}

TEST_F(Cli, SectorsAndMeasures) {
  ASSERT_EQ(run({"sectors", "--L", "3", "--levels", "2", "--out", dir_.string()}).code, 0);
  const auto sectors = lines_of(dir_ / "sectors_L3.csv");
  EXPECT_EQ(sectors[0], "L,Sz,E0,E1");
  EXPECT_EQ(sectors.size(), 8u);
  const auto r = run({"measures", "--L", "4", "--hmax", "16", "--hstep", "1", "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto measures = lines_of(dir_ / "measures_L4.csv");
  EXPECT_EQ(measures[0], "H,S1,S2_nn_chain,S2_rung,C_nn_chain,C_rung,F_R,chi_R");
  EXPECT_EQ(measures.size(), 18u);
}

TEST_F(Cli, FitGapRoundTrip) {
  const auto input = dir_ / "synthetic.csv";
  {
    std::ofstream os(input);
    os << "L,Delta_L\n";
    char buf[64];
    for (int L = 3; L <= 16; ++L) {
      std::snprintf(buf, sizeof buf, "%d,%.17g\n", L, 11.8416 + 0.9739 / L + 0.6621 / (L * L));
      os << buf;
    }
  }
  const auto r = run({"fit-gap", "--input", input.string(), "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = lines_of(dir_ / "fit_gap.csv");
  EXPECT_EQ(lines[0], "c0,c1,c2,residual,Delta_inf");
  std::stringstream row(lines[1]);
  std::vector<double> v;
  for (std::string cell; std::getline(row, cell, ',');) v.push_back(std::stod(cell));
  EXPECT_NEAR(v[0], 11.8416, 1e-9);
  EXPECT_NEAR(v[1], 0.9739, 1e-9);
  EXPECT_NEAR(v[2], 0.6621, 1e-9);
  EXPECT_NEAR(v[4], 11.8416, 1e-9);
}

TEST_F(Cli, AnalyticAndRfs) {
  const std::vector<std::string> amplitudes{"--Azz", "0.05", "--Bzz", "-0.05", "--Apm", "0.05", "--Bpm", "-0.05"};
  auto args = std::vector<std::string>{"analytic", "--points", "20", "--out", dir_.string()};
  args.insert(args.end(), amplitudes.begin(), amplitudes.end());
  auto r = run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* name : {"analytic_c1.csv", "analytic_c2.csv"}) {
    const auto lines = lines_of(dir_ / name);
    EXPECT_EQ(lines[0], "H,m,dm_dH,S1,dS1_dH,S2,dS2_dH,C,dC_dH");
    EXPECT_EQ(lines.size(), 21u);
  }
  r = run({"rfs", "--points", "10", "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines_of(dir_ / "rfs_c2.csv")[0], "H,F_R,chi_R");
}

TEST_F(Cli, ExitCodes) {
  auto r = run({"gap", "--hstep", "-1", "--out", dir_.string()});
  EXPECT_EQ(r.code, kConfigError);
  const auto j = nlohmann::json::parse(r.err);
  EXPECT_EQ(j.at("exit_code"), 2);
  EXPECT_EQ(j.at("error"), "config");

  EXPECT_EQ(run({"gap", "--bogus", "1"}).code, kConfigError);
  EXPECT_EQ(run({}).code, kConfigError);

  // Unit amplitudes make the two-site matrix non-positive.
  r = run({"analytic", "--points", "5", "--out", dir_.string()});
  EXPECT_EQ(r.code, kAnalyticDomain);
  EXPECT_EQ(nlohmann::json::parse(r.err).at("error"), "parameter_validity");

  r = run({"gap", "--L", "8", "--max_iter", "2", "--out", dir_.string()});
  EXPECT_EQ(r.code, kNonConvergence);
  EXPECT_EQ(nlohmann::json::parse(r.err).at("error"), "non_convergence");

  EXPECT_EQ(run({"sweep", "--hmin", "-1", "--out", dir_.string()}).code, kConfigError);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cache, KeyAndHash) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  LadderGeometry g;
  g.L = 4;
  SweepOptions o;
  const auto k1 = cache_key(g, o);
  o.lanczos.seed = 2;
  EXPECT_NE(k1, cache_key(g, o));
}

TEST_F(Cli, CacheRoundTrip) {
  LadderGeometry g;
  g.L = 3;
  SweepOptions o;
  const auto spectra = sector_sweep(g, o);
  const auto key = cache_key(g, o);
  store_spectra(dir_, key, spectra);
  const auto back = load_spectra(dir_, key);
  ASSERT_TRUE(back.has_value());
  ASSERT_EQ(back->size(), spectra.size());
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    EXPECT_EQ((*back)[i].eigenvalues, spectra[i].eigenvalues);
    EXPECT_EQ((*back)[i].ground_vector, spectra[i].ground_vector);
    EXPECT_EQ((*back)[i].n_up, spectra[i].n_up);
  }
  EXPECT_FALSE(load_spectra(dir_, key + " other").has_value());
}
