#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "aenet/rng.hpp"
#include "aenet/tracking/backtest.hpp"
#include "aenet/tracking/panel.hpp"

namespace aenet::tracking {
namespace {

namespace fs = std::filesystem;

fs::path temp_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("aenet_test_" + tag);
  fs::create_directories(dir);
  return dir;
}

TEST(DailyReturns, HandValues) {
  Vec<double> constant = Vec<double>::Constant(5, 42.0);
  EXPECT_TRUE(daily_returns(constant).isZero(0));

  Vec<double> two(2);
  two << 100, 110;
  EXPECT_NEAR(daily_returns(two)[0], 0.10, 1e-15);

  Vec<double> three(3);
  three << 100, 110, 99;
  const Vec<double> r = daily_returns(three);
  EXPECT_NEAR(r[0], 0.10, 1e-15);
  EXPECT_NEAR(r[1], -0.10, 1e-15);

  EXPECT_THROW(daily_returns(Vec<double>::Constant(1, 1.0)), std::invalid_argument);
}

TEST(TrackingError, FixtureAndInvariances) {
  Vec<double> actual(2), replicated(2);
  actual << 0.0, 2.0;
  replicated << 0.0, 0.0;  // err = (0, 2)
  EXPECT_NEAR(tracking_error(actual, replicated), std::sqrt(252.0) * std::sqrt(2.0), 1e-10);

  EXPECT_DOUBLE_EQ(tracking_error(actual, actual), 0.0);

  Rng rng(3);
  Vec<double> a(40), b(40);
  for (int i = 0; i < 40; ++i) {
    a[i] = 0.01 * rng.normal();
    b[i] = 0.01 * rng.normal();
  }
  const double te = tracking_error(a, b);
  // Adding a constant to every error leaves the TE unchanged.
  EXPECT_NEAR(tracking_error((a.array() + 0.37).matrix().eval(), b), te, 1e-12);
  // Scaling all errors scales the TE linearly.
  const Vec<double> mid = 0.5 * (a + b);
  const Vec<double> a2 = mid + 3.0 * (a - mid);
  const Vec<double> b2 = mid + 3.0 * (b - mid);
  EXPECT_NEAR(tracking_error(a2, b2), 3.0 * te, 1e-10);
}

TEST(PanelIo, LoadsWellFormedFile) {
  const fs::path dir = temp_dir("panel_ok");
  const fs::path file = dir / "panel.csv";
  std::ofstream(file) << "date,index,AA,BB\n"
                         "2021-01-04,100,10,20\n"
                         "2021-01-05,101,10.5,19.5\n"
                         "2021-01-06,99.5,10.2,20.2\n";
  const PricePanel panel = load_prices(file.string());
  EXPECT_EQ(panel.T(), 3);
  EXPECT_EQ(panel.n_assets(), 2);
  EXPECT_EQ(panel.dates[1], "2021-01-05");
  EXPECT_DOUBLE_EQ(panel.asset_prices(2, 1), 20.2);
}

TEST(PanelIo, RejectsBadFiles) {
  const fs::path dir = temp_dir("panel_bad");
  const auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream(dir / name) << body;
    return (dir / name).string();
  };

  const std::string dup = write("dup.csv",
                                "date,index,AA\n2021-01-04,100,10\n2021-01-04,101,11\n");
  try {
    load_prices(dup);
    FAIL() << "expected duplicate-date error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("2021-01-04"), std::string::npos);
  }

  EXPECT_THROW(load_prices(write("neg.csv", "date,index,AA\n2021-01-04,100,-1\n")),
               std::runtime_error);
  EXPECT_THROW(load_prices(write("gap.csv", "date,index,AA\n2021-01-04,100,\n")),
               std::runtime_error);
  EXPECT_THROW(load_prices(write("order.csv",
                                 "date,index,AA\n2021-01-05,100,1\n2021-01-04,100,1\n")),
               std::runtime_error);
  EXPECT_THROW(load_prices(write("header.csv", "time,index,AA\n2021-01-04,100,1\n")),
               std::runtime_error);
  EXPECT_THROW(load_prices((dir / "missing.csv").string()), std::runtime_error);
}

// Canonicalization: write(load(f)) is a fixed point of load-then-write.
TEST(PanelIo, RoundTripIsCanonical) {
  const fs::path dir = temp_dir("panel_rt");
  const fs::path messy = dir / "messy.csv";
  std::ofstream(messy) << "date,index,AA\n"
                          "2021-01-04,100.0,10.50\n"
                          "2021-01-05,0101,10.2500\n";
  const PricePanel p1 = load_prices(messy.string());
  const fs::path canon = dir / "canon.csv";
  write_panel(p1, canon.string());
  const PricePanel p2 = load_prices(canon.string());
  const fs::path canon2 = dir / "canon2.csv";
  write_panel(p2, canon2.string());

  std::ifstream f1(canon), f2(canon2);
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  EXPECT_EQ(s1.str(), s2.str());
  EXPECT_EQ((p1.index_prices - p2.index_prices).cwiseAbs().maxCoeff(), 0.0);
}

TEST(MakeWindows, CountsAndAlignment) {
  SyntheticPanelSpec spec;
  spec.n_assets = 3;
  spec.k_true = 2;

  spec.T = 118;
  auto w118 = make_windows(make_synthetic_panel(spec));
  EXPECT_EQ(w118.size(), 1u);
  EXPECT_EQ(w118[0].train_begin, 0);
  EXPECT_EQ(w118[0].test_end, 118);

  spec.T = 138;
  auto w138 = make_windows(make_synthetic_panel(spec));
  EXPECT_EQ(w138.size(), 2u);
  EXPECT_EQ(w138[0].test_end, 118);
  EXPECT_EQ(w138[1].test_end, 138);
  EXPECT_EQ(w138[0].test_end, w138[1].test_begin);  // adjacent test slices

  // Two years of trading days: latest-aligned fixed 98/20 windows give 20.
  spec.T = 508;
  auto w508 = make_windows(make_synthetic_panel(spec));
  EXPECT_EQ(w508.size(), 20u);
  EXPECT_EQ(w508.back().test_end, 508);

  spec.T = 100;
  EXPECT_THROW(make_windows(make_synthetic_panel(spec)), std::invalid_argument);
}

TEST(Backtest, NoiselessExactReplication) {
  SyntheticPanelSpec spec;
  spec.T = 118;
  spec.n_assets = 50;
  spec.k_true = 20;
  spec.noise_sd = 0.0;
  spec.seed = 5;
  const PricePanel panel = make_synthetic_panel(spec);

  const auto report = backtest(panel, MethodTag::ssls, {20});
  ASSERT_EQ(report.rows.size(), 1u);
  const auto& row = report.rows[0];
  ASSERT_FALSE(row.failed) << row.error;
  EXPECT_EQ(row.selected.size(), 20u);
  EXPECT_LE(row.fitted_te, 1e-8);
  EXPECT_LE(row.predicted_te, 1e-8);
}

TEST(Backtest, ReportShapesAndDeterminism) {
  SyntheticPanelSpec spec;
  spec.T = 138;
  spec.n_assets = 40;
  spec.k_true = 10;
  spec.noise_sd = 0.002;
  spec.seed = 7;
  const PricePanel panel = make_synthetic_panel(spec);

  TrackingOptions serial;
  serial.workers = 1;
  TrackingOptions parallel;
  parallel.workers = 4;
  const std::vector<Index> ks = {5, 10, 15};

  const auto ssls1 = backtest(panel, MethodTag::ssls, ks, serial);
  const auto ssls2 = backtest(panel, MethodTag::ssls, ks, parallel);
  EXPECT_EQ(ssls1.report_csv(), ssls2.report_csv());
  EXPECT_EQ(ssls1.weights_csv(), ssls2.weights_csv());

  const auto lasso = backtest(panel, MethodTag::lasso, ks, serial);
  const auto merged = merge_reports({ssls1, lasso});
  EXPECT_EQ(merged.rows.size(), 2u * 2u * 3u);  // windows x methods x budgets

  const std::string csv = merged.report_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "window_start,window_end,method,k,fitted_te,predicted_te");
  const std::string summary = merged.summary_text();
  // Budget columns are reported in descending order.
  const auto p15 = summary.find("Pred(15)");
  const auto p10 = summary.find("Pred(10)");
  const auto p5 = summary.find("Pred(5)");
  EXPECT_NE(p15, std::string::npos);
  EXPECT_LT(p15, p10);
  EXPECT_LT(p10, p5);

  for (const auto& row : merged.rows) {
    if (row.failed) continue;
    EXPECT_EQ(row.selected.size(), static_cast<std::size_t>(row.k));
    EXPECT_GE(row.fitted_te, 0.0);
    EXPECT_TRUE(std::isfinite(row.predicted_te));
  }
}

TEST(Backtest, DuplicateAssetWindowFailsGracefully) {
  SyntheticPanelSpec spec;
  spec.T = 118;
  spec.n_assets = 10;
  spec.k_true = 4;
  spec.noise_sd = 0.0;
  spec.seed = 9;
  PricePanel panel = make_synthetic_panel(spec);
  panel.asset_prices.col(5) = panel.asset_prices.col(0);  // exact duplicate of a basket asset

  const auto report = backtest(panel, MethodTag::ssls, {4, 6});
  ASSERT_EQ(report.rows.size(), 2u);
  int failed = 0;
  for (const auto& row : report.rows) {
    if (row.failed) {
      ++failed;
      EXPECT_FALSE(row.error.empty());
    }
  }
  EXPECT_LE(failed, 2);
  const std::string csv = report.report_csv();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);  // header + one row per budget
}

TEST(Backtest, ValidatesBudgets) {
  SyntheticPanelSpec spec;
  spec.T = 118;
  spec.n_assets = 5;
  spec.k_true = 2;
  const PricePanel panel = make_synthetic_panel(spec);
  EXPECT_THROW(backtest(panel, MethodTag::ssls, {0}), std::invalid_argument);
  EXPECT_THROW(backtest(panel, MethodTag::ssls, {99}), std::invalid_argument);
  EXPECT_THROW(backtest(panel, MethodTag::adaptive_lasso, {2}), std::invalid_argument);
}

}  // namespace
}  // namespace aenet::tracking
