#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aenet/cli/commands.hpp"
#include "aenet/cli/config.hpp"
#include "aenet/io/dataset_csv.hpp"
#include "aenet/oracle.hpp"
#include "aenet/solve.hpp"
#include "aenet/standardize.hpp"
#include "aenet/tracking/panel.hpp"
#include "test_util.hpp"

namespace aenet::cli {
namespace {

namespace fs = std::filesystem;

fs::path temp_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("aenet_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Config, ParsesSectionsAndTypes) {
  const ConfigFile cfg = ConfigFile::parse_string(
      "# comment\n"
      "[fit]\n"
      "lambda1 = 0.5\n"
      "data = d.csv\n"
      "flag = true\n"
      "grid = 1e-4, 1e-2,1\n"
      "[design a]\n"
      "n = 100\n");
  const Settings* fit = cfg.find("fit");
  ASSERT_NE(fit, nullptr);
  EXPECT_DOUBLE_EQ(fit->get_double("lambda1", 0), 0.5);
  EXPECT_EQ(fit->get_str("data"), "d.csv");
  EXPECT_TRUE(fit->get_bool("flag", false));
  EXPECT_EQ(fit->get_doubles("grid").size(), 3u);
  EXPECT_NE(cfg.find("design a"), nullptr);
  EXPECT_EQ(cfg.find("missing"), nullptr);

  EXPECT_THROW(ConfigFile::parse_string("key = 1\n"), std::runtime_error);
  EXPECT_THROW(ConfigFile::parse_string("[broken\n"), std::runtime_error);
}

TEST(Config, RejectsUnknownKeys) {
  Settings s;
  s.set("lambda1", "1");
  s.set("tyop", "2");
  EXPECT_THROW(s.check_allowed({"lambda1"}, "[fit]"), std::runtime_error);
}

TEST(CmdFit, LargePenaltyGivesAllZeros) {
  const fs::path dir = temp_dir("fit_zero");
  Dataset<double> ds = test::random_dataset(30, 4, 2001);
  io::write_dataset_csv(ds, (dir / "data.csv").string());

  CommonFlags flags;
  flags.out_dir = (dir / "out").string();
  flags.overrides = {{"data", (dir / "data.csv").string()},
                     {"method", "lasso"},
                     {"lambda1", "1e9"}};
  ASSERT_EQ(run_command("fit", flags), 0);

  const std::string coeffs = slurp(dir / "out" / "coefficients.csv");
  std::stringstream ss(coeffs);
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line, "index,name,value");
  while (std::getline(ss, line)) {
    EXPECT_EQ(line.substr(line.rfind(',') + 1), "0");
  }
}

TEST(CmdFit, DeterministicBytes) {
  const fs::path dir = temp_dir("fit_det");
  Dataset<double> ds = test::random_dataset(40, 6, 2003);
  io::write_dataset_csv(ds, (dir / "data.csv").string());

  for (int run = 0; run < 2; ++run) {
    CommonFlags flags;
    flags.out_dir = (dir / ("out" + std::to_string(run))).string();
    flags.overrides = {{"data", (dir / "data.csv").string()},
                       {"method", "adaptive_elastic_net"},
                       {"sigma", "1.0"},
                       {"lambda2", "0.01"}};
    ASSERT_EQ(run_command("fit", flags), 0);
  }
  EXPECT_EQ(slurp(dir / "out0" / "coefficients.csv"), slurp(dir / "out1" / "coefficients.csv"));
  EXPECT_EQ(slurp(dir / "out0" / "fit_summary.txt"), slurp(dir / "out1" / "fit_summary.txt"));
}

// Bundled 4-predictor fixture against the enumeration oracle.
TEST(CmdFit, FixtureMatchesBruteForce) {
  const fs::path fixture = fs::path(AENET_SOURCE_DIR) / "data" / "fixture_p4.csv";
  ASSERT_TRUE(fs::exists(fixture));
  const fs::path dir = temp_dir("fit_fixture");

  CommonFlags flags;
  flags.out_dir = dir.string();
  flags.overrides = {{"data", fixture.string()},
                     {"method", "elastic_net"},
                     {"lambda1", "2.5"},
                     {"lambda2", "0.1"}};
  ASSERT_EQ(run_command("fit", flags), 0);

  Dataset<double> ds = io::read_dataset_csv(fixture.string());
  auto [sds, rec] = standardize(ds, true);
  PenaltySpec<double> spec;
  spec.lambda1 = 2.5;
  spec.lambda2 = 0.1;
  const Vec<double> expected = rec.coef_to_original(brute_force_fit(sds, spec).beta);

  std::stringstream ss(slurp(dir / "coefficients.csv"));
  std::string line;
  std::getline(ss, line);
  Index j = 0;
  while (std::getline(ss, line)) {
    const double value = std::strtod(line.substr(line.rfind(',') + 1).c_str(), nullptr);
    EXPECT_NEAR(value, expected[j], 1e-6);
    ++j;
  }
  EXPECT_EQ(j, 4);
}

TEST(CmdSimulate, WritesDatasetAndTruth) {
  const fs::path dir = temp_dir("simulate");
  CommonFlags flags;
  flags.out_dir = dir.string();
  flags.overrides = {{"n", "25"}, {"p", "6"},   {"beta", "9,6"},
                     {"sigma", "1"}, {"cov", "ar1"}, {"rho", "0.5"},
                     {"seed", "7"}};
  ASSERT_EQ(run_command("simulate", flags), 0);
  const Dataset<double> ds = io::read_dataset_csv((dir / "dataset.csv").string());
  EXPECT_EQ(ds.n(), 25);
  EXPECT_EQ(ds.p(), 6);
  EXPECT_NE(slurp(dir / "beta_true.csv").find("0,9"), std::string::npos);
}

TEST(CmdBenchmark, SmokeAndSeedBehaviour) {
  const fs::path dir = temp_dir("benchmark");
  const fs::path cfg_path = dir / "bench.cfg";
  std::ofstream(cfg_path) << "[benchmark]\n"
                             "designs = tiny\n"
                             "methods = lasso,ssls\n"
                             "r = 2\n"
                             "sigma_mode = design\n"
                             "[design tiny]\n"
                             "n = 40\n"
                             "p = 8\n"
                             "beta = 9,6\n"
                             "sigma = 1\n"
                             "cov = identity\n"
                             "seed = 3\n";

  CommonFlags flags;
  flags.config_path = cfg_path.string();
  flags.out_dir = (dir / "a").string();
  ASSERT_EQ(run_command("benchmark", flags), 0);
  const std::string csv_a = slurp(dir / "a" / "benchmark.csv");
  EXPECT_NE(csv_a.find("design,method,metric,mean,se,n_ok,n_failed"), std::string::npos);
  EXPECT_NE(csv_a.find("ssls,l1_loss"), std::string::npos);

  // A different seed changes values but not the layout.
  flags.out_dir = (dir / "b").string();
  flags.seed = 99;
  ASSERT_EQ(run_command("benchmark", flags), 0);
  const std::string csv_b = slurp(dir / "b" / "benchmark.csv");
  EXPECT_NE(csv_a, csv_b);
  auto layout = [](const std::string& csv) {
    std::string out;
    std::stringstream ss(csv);
    std::string line;
    while (std::getline(ss, line)) out += line.substr(0, line.find_first_of("0123456789.-", line.find(','))) + "\n";
    return out;
  };
  EXPECT_EQ(layout(csv_a), layout(csv_b));
}

TEST(CmdTrack, SmokeOnSyntheticPanel) {
  const fs::path dir = temp_dir("track");
  tracking::SyntheticPanelSpec spec;
  spec.T = 118;
  spec.n_assets = 40;
  spec.k_true = 10;
  spec.noise_sd = 0.0;
  spec.seed = 11;
  tracking::write_panel(tracking::make_synthetic_panel(spec), (dir / "panel.csv").string());

  CommonFlags flags;
  flags.out_dir = (dir / "out").string();
  flags.overrides = {{"panel", (dir / "panel.csv").string()},
                     {"methods", "ssls,lasso"},
                     {"k_list", "5,10,15"}};
  ASSERT_EQ(run_command("track", flags), 0);

  const std::string summary = slurp(dir / "out" / "tracking_summary.txt");
  // Budget columns in descending order in the text table.
  EXPECT_LT(summary.find("Pred(15)"), summary.find("Pred(10)"));
  EXPECT_LT(summary.find("Pred(10)"), summary.find("Pred(5)"));
  const std::string report = slurp(dir / "out" / "tracking_report.csv");
  EXPECT_NE(report.find("ssls,10"), std::string::npos);
  // Noiseless panel: the exact-budget fit tracks perfectly.
  std::stringstream ss(report);
  std::string line;
  std::getline(ss, line);
  bool found_exact = false;
  while (std::getline(ss, line)) {
    if (line.find("ssls,10,") != std::string::npos) {
      const double te = std::strtod(line.substr(line.rfind(',') + 1).c_str(), nullptr);
      EXPECT_LT(te, 1e-8);
      found_exact = true;
    }
  }
  EXPECT_TRUE(found_exact);
}

TEST(CmdErrors, MissingInputsGiveExitCodeOne) {
  CommonFlags flags;
  flags.overrides = {{"data", "/nonexistent/nope.csv"}};
  EXPECT_EQ(run_command("fit", flags), 1);
  flags.overrides = {{"panel", "/nonexistent/nope.csv"}, {"k_list", "5"}};
  EXPECT_EQ(run_command("track", flags), 1);
  EXPECT_EQ(run_command("unknown_command", {}), 1);
}

TEST(CliBinary, SubprocessExitCodes) {
  const fs::path dir = temp_dir("binary");
  const std::string exe = AENET_CLI_PATH;
  ASSERT_TRUE(fs::exists(exe));

  const std::string bad = exe + " fit --set data=/nonexistent.csv --out-dir " +
                          (dir / "out").string() + " 2>/dev/null";
  const int rc_bad = std::system(bad.c_str());
  EXPECT_NE(WEXITSTATUS(rc_bad), 0);

  Dataset<double> ds = test::random_dataset(20, 3, 2005);
  io::write_dataset_csv(ds, (dir / "data.csv").string());
  const std::string good = exe + " fit --set data=" + (dir / "data.csv").string() +
                           " --set method=lasso --set sigma=1 --out-dir " +
                           (dir / "out").string() + " 2>/dev/null";
  const int rc_good = std::system(good.c_str());
  EXPECT_EQ(WEXITSTATUS(rc_good), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "coefficients.csv"));
}

}  // namespace
}  // namespace aenet::cli
