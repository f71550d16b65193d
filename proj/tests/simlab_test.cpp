#include <gtest/gtest.h>

#include <cmath>

#include "aenet/rng.hpp"
#include "aenet/sim/benchmark.hpp"
#include "aenet/sim/design.hpp"
#include "aenet/sim/diagnostics.hpp"
#include "aenet/types.hpp"

namespace aenet {
namespace {

using sim::CovKind;
using sim::SimDesign;

SimDesign strong_design(Index n, Index p, double sigma, std::uint64_t seed) {
  SimDesign d;
  d.n = n;
  d.p = p;
  d.sigma = sigma;
  d.seed = seed;
  d.beta_true = Vec<double>(2);
  d.beta_true << 9, 6;
  return d;
}

TEST(Generate, NoiselessMatchesModel) {
  SimDesign d = strong_design(30, 6, 0.0, 5);
  auto [ds, beta] = sim::generate(d);
  EXPECT_LT((ds.y() - ds.X() * beta).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Generate, SeedsAreReproducibleAndDistinct) {
  SimDesign d = strong_design(15, 4, 1.0, 7);
  auto [a, ba] = sim::generate(d, 3);
  auto [b, bb] = sim::generate(d, 3);
  EXPECT_EQ((a.X() - b.X()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((a.y() - b.y()).cwiseAbs().maxCoeff(), 0.0);
  auto [c, bc] = sim::generate(d, 4);
  EXPECT_GT((a.X() - c.X()).cwiseAbs().maxCoeff(), 0.0);
}

// Monte-Carlo covariance oracle for the ar1 generator.
TEST(Generate, Ar1CovarianceMatchesTarget) {
  SimDesign d;
  d.n = 1000000;
  d.p = 3;
  d.cov = CovKind::ar1;
  d.rho = 0.5;
  d.sigma = 0.0;
  d.beta_true = Vec<double>::Zero(1);
  d.seed = 11;
  auto [ds, beta] = sim::generate(d);
  const Mat<double> S = ds.X().transpose() * ds.X() / static_cast<double>(d.n);
  Mat<double> target(3, 3);
  target << 1, 0.5, 0.25, 0.5, 1, 0.5, 0.25, 0.5, 1;
  EXPECT_LT((S - target).cwiseAbs().maxCoeff(), 0.01);
}

// Analytic correlation of the dependent column in the ic design:
// corr(x_p, x_1..x_3) = (1/6, 5/6, 1/2) since var(x_p) = 1 by construction.
TEST(Generate, IcViolationCorrelations) {
  SimDesign d;
  d.n = 1000000;
  d.p = 5;
  d.cov = CovKind::ic_violation;
  d.sigma = 0.0;
  d.beta_true = Vec<double>::Zero(1);
  d.seed = 13;
  auto [ds, beta] = sim::generate(d);
  const double n = static_cast<double>(d.n);
  const Index last = d.p - 1;
  EXPECT_NEAR(ds.X().col(last).squaredNorm() / n, 1.0, 0.01);
  const double expected[] = {1.0 / 6.0, 5.0 / 6.0, 0.5, 0.0};
  for (Index j = 0; j < 4; ++j)
    EXPECT_NEAR(ds.X().col(j).dot(ds.X().col(last)) / n, expected[j], 0.01);
}

TEST(Generate, ValidatesDesign) {
  SimDesign d = strong_design(10, 3, 1.0, 1);
  d.cov = CovKind::ic_violation;  // needs p >= 4
  EXPECT_THROW(sim::generate(d), std::invalid_argument);
  d = strong_design(10, 5, 1.0, 1);
  d.cov = CovKind::ar1;
  d.rho = 1.0;
  EXPECT_THROW(sim::generate(d), std::invalid_argument);
}

TEST(IcCheck, OrthogonalDesignGivesZero) {
  Mat<double> X = Mat<double>::Zero(8, 4);
  for (Index j = 0; j < 4; ++j) X(2 * j, j) = 1.0;  // disjoint supports
  Vec<double> signs(2);
  signs << 1, 1;
  EXPECT_DOUBLE_EQ(sim::ic_check(X, SupportSet({0, 1}), signs), 0.0);
}

// Sample convergence to the population value 1 (the boundary case) on the
// correlated-spike design.
TEST(IcCheck, IcDesignSitsAtBoundary) {
  SimDesign d;
  d.n = 100000;
  d.p = 5;
  d.cov = CovKind::ic_violation;
  d.sigma = 0.0;
  d.beta_true = Vec<double>::Zero(1);
  d.seed = 17;
  auto [ds, beta] = sim::generate(d);
  Vec<double> signs(2);
  signs << 1, 1;
  const double value = sim::ic_check(ds.X(), SupportSet({0, 1}), signs);
  EXPECT_NEAR(value, 1.0, 0.02);
}

TEST(IcCheck, SingularC11Rejected) {
  Mat<double> X = Mat<double>::Ones(6, 3);  // identical columns
  Vec<double> signs(2);
  signs << 1, 1;
  EXPECT_THROW(sim::ic_check(X, SupportSet({0, 1}), signs), std::runtime_error);
}

TEST(Benchmark, NoiselessSslsRecovers) {
  SimDesign d = strong_design(50, 10, 0.0, 19);
  sim::BenchmarkOptions opts;
  const auto report = sim::run_benchmark({d}, {MethodTag::ssls}, 1, opts);
  const auto& cell = report.cell(0, MethodTag::ssls);
  EXPECT_EQ(cell.n_ok, 1);
  EXPECT_LE(cell.l2.mean, 1e-8);
}

TEST(Benchmark, DeterministicAcrossWorkerCounts) {
  SimDesign d = strong_design(40, 8, 2.0, 23);
  const std::vector<MethodTag> methods = {MethodTag::lasso, MethodTag::adaptive_elastic_net,
                                          MethodTag::ssls};
  sim::BenchmarkOptions serial;
  serial.workers = 1;
  sim::BenchmarkOptions parallel;
  parallel.workers = 4;
  const auto a = sim::run_benchmark({d}, methods, 12, serial);
  const auto b = sim::run_benchmark({d}, methods, 12, parallel);
  EXPECT_EQ(a.to_csv(), b.to_csv());
  EXPECT_EQ(a.to_text(), b.to_text());
}

TEST(Benchmark, FailuresAreCountedNotFatal) {
  // n = 2 with four predictors: the refit stage cannot have more active
  // variables than observations, so some replications fail and are recorded.
  SimDesign d;
  d.n = 4;
  d.p = 12;
  d.sigma = 8.0;
  d.seed = 29;
  d.beta_true = Vec<double>(2);
  d.beta_true << 9, 6;
  const auto report = sim::run_benchmark({d}, {MethodTag::ssls}, 8, {});
  const auto& cell = report.cell(0, MethodTag::ssls);
  EXPECT_EQ(cell.n_ok + cell.n_failed, 8);
}

TEST(ConsistencyCurve, PerfectAtZeroNoise) {
  SimDesign d = strong_design(0, 12, 0.0, 31);
  sim::SelectorOptions sel;
  sel.lambda2 = 1e-4;
  const auto points = sim::consistency_curve(d, {30, 60}, 5, sel);
  ASSERT_EQ(points.size(), 2u);
  for (const auto& pt : points) {
    EXPECT_EQ(pt.n_failed, 0);
    EXPECT_DOUBLE_EQ(pt.accuracy, 1.0);
  }
}

TEST(ConsistencyCurve, RequiresIncreasingGrid) {
  SimDesign d = strong_design(0, 6, 1.0, 37);
  EXPECT_THROW(sim::consistency_curve(d, {100, 50}, 2, {}), std::invalid_argument);
}

TEST(ErrorDecay, ZeroAtZeroNoise) {
  SimDesign d = strong_design(0, 10, 0.0, 41);
  sim::SelectorOptions sel;
  const auto points = sim::error_decay(d, {40, 80}, 3, sel);
  for (const auto& pt : points) {
    EXPECT_LE(pt.ssls_bias2, 1e-16);
    EXPECT_LE(pt.ssls_mse, 1e-16);
    EXPECT_DOUBLE_EQ(pt.oracle_mse, 0.0);
  }
}

TEST(KsStatistic, DiscriminatesShift) {
  Rng rng(43);
  std::vector<double> normal(2000), shifted(2000);
  for (int i = 0; i < 2000; ++i) {
    normal[i] = rng.normal();
    shifted[i] = rng.normal() + 1.0;
  }
  EXPECT_LT(sim::ks_statistic_normal(normal), 1.63 / std::sqrt(2000.0));
  EXPECT_GT(sim::ks_statistic_normal(shifted), 0.2);
}

TEST(NormalityDiag, SmokeAndValidation) {
  SimDesign d = strong_design(60, 8, 1.0, 47);
  Vec<double> alpha(2);
  alpha << 1, 1;
  alpha /= alpha.norm();
  sim::SelectorOptions sel;
  sel.method = MethodTag::ssls;
  sel.workers = 4;
  EXPECT_THROW(sim::normality_diag(d, 100, alpha, sel), std::invalid_argument);

  const auto diag = sim::normality_diag(d, 500, alpha, sel);
  EXPECT_GE(diag.retained, 250);
  EXPECT_LT(std::abs(diag.mean), 0.2);
  EXPECT_NEAR(diag.variance, 1.0, 0.3);

  Vec<double> bad_alpha(2);
  bad_alpha << 1, 1;
  EXPECT_THROW(sim::normality_diag(d, 500, bad_alpha, sel), std::invalid_argument);
}

TEST(IcPathRates, SmokeRates) {
  SimDesign d;
  d.n = 60;
  d.p = 30;
  d.cov = CovKind::ic_violation;
  d.sigma = 1.0;
  d.seed = 53;
  d.beta_true = Vec<double>(2);
  d.beta_true << 9, 6;
  const auto rates = sim::ic_path_rates(d, 10, 1000.0, 1.0, sim::InitKind::lasso, 2);
  EXPECT_GE(rates.aen_rate, 0.0);
  EXPECT_LE(rates.aen_rate, 1.0);
  EXPECT_GE(rates.lasso_rate, 0.0);
  EXPECT_LE(rates.lasso_rate, 1.0);
}

}  // namespace
}  // namespace aenet
