#include <gtest/gtest.h>

#include <cmath>

#include "aenet/losses.hpp"
#include "aenet/rng.hpp"
#include "aenet/sim/design.hpp"
#include "aenet/solve.hpp"
#include "aenet/ssls.hpp"
#include "aenet/standardize.hpp"
#include "test_util.hpp"

namespace aenet {
namespace {

TEST(OlsRefit, NoiselessExactRecovery) {
  Vec<double> beta = Vec<double>::Zero(8);
  beta[1] = 9;
  beta[4] = -6;
  Dataset<double> ds = test::planted_dataset(40, 8, beta, 0.0, 1001);
  const auto fit = ols_refit(ds, SupportSet({1, 4}));
  EXPECT_LT((fit.beta - beta).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(OlsRefit, EmptySupport) {
  Dataset<double> ds = test::random_dataset(10, 3, 1003);
  const auto fit = ols_refit(ds, SupportSet{});
  EXPECT_TRUE(fit.beta.isZero(0));
  EXPECT_DOUBLE_EQ(fit.objective, 0.5 * ds.y().squaredNorm());
}

// Normal-equations oracle: the refit residual is orthogonal to every
// selected column.
TEST(OlsRefit, ResidualOrthogonality) {
  for (int rep = 0; rep < 10; ++rep) {
    Dataset<double> ds = test::random_dataset(25, 10, 1100 + rep);
    const SupportSet support({0, 2, 3, 7});
    const auto fit = ols_refit(ds, support);
    const Vec<double> r = ds.y() - ds.X() * fit.beta;
    for (Index j : support.indices()) EXPECT_LT(std::abs(ds.X().col(j).dot(r)), 1e-9);
    EXPECT_LT(fit.kkt_max_violation, 1e-9);
  }
}

TEST(OlsRefit, RankDeficiencyNamesColumns) {
  Rng rng(1201);
  Mat<double> X = test::random_matrix(20, 4, rng);
  X.col(3) = 2.0 * X.col(1);  // exact collinearity inside the support
  Dataset<double> ds(X, test::random_vector(20, rng));
  try {
    ols_refit(ds, SupportSet({0, 1, 3}));
    FAIL() << "expected rank-deficiency error";
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("rank deficient"), std::string::npos);
    // One of the two collinear columns must be named (QR pivoting decides which).
    EXPECT_TRUE(what.find("1") != std::string::npos || what.find("3") != std::string::npos)
        << what;
  }
}

TEST(OlsRefit, SupportLargerThanNRejected) {
  Dataset<double> ds = test::random_dataset(3, 5, 1301);
  EXPECT_THROW(ols_refit(ds, SupportSet({0, 1, 2, 3})), std::invalid_argument);
}

TEST(FitSsls, SupportInheritance) {
  for (int rep = 0; rep < 10; ++rep) {
    Vec<double> beta = Vec<double>::Zero(12);
    beta[0] = 9;
    beta[1] = 6;
    Dataset<double> raw = test::planted_dataset(50, 12, beta, 1.0, 1400 + rep);
    auto [ds, rec] = standardize(raw);

    const Vec<double> init = initial_estimator(ds, std::optional<double>(1.0));
    SslsConfig<double> cfg;
    cfg.penalty.lambda1 = selection_lambda1<double>(ds.n(), ds.p(), 1.0);
    cfg.penalty.lambda2 = 1e-3;
    cfg.penalty.gamma = 1.0;

    PenaltySpec<double> sel_spec = cfg.penalty;
    sel_spec.weights = adaptive_weights(init, cfg.penalty.gamma);
    const auto selector = fit_adaptive_elastic_net(ds, sel_spec);

    const auto two_stage = fit_ssls(ds, cfg, init);
    EXPECT_EQ(two_stage.support, selector.support);
    EXPECT_EQ(two_stage.method_tag, MethodTag::ssls);

    // Refit orthogonality on the selected columns.
    const Vec<double> r = ds.y() - ds.X() * two_stage.beta;
    for (Index j : two_stage.support.indices())
      EXPECT_LT(std::abs(ds.X().col(j).dot(r)), 1e-9);
  }
}

TEST(FitSsls, EmptySelectionGivesZero) {
  Dataset<double> ds = test::random_dataset(20, 5, 1501);
  SslsConfig<double> cfg;
  cfg.selector = MethodTag::lasso;
  cfg.penalty.lambda1 = (ds.X().transpose() * ds.y()).cwiseAbs().maxCoeff() * 2.0;
  const auto fit = fit_ssls(ds, cfg);
  EXPECT_TRUE(fit.beta.isZero(0));
  EXPECT_TRUE(fit.support.empty());
}

TEST(FitSsls, KTargetBeyondNRejected) {
  Dataset<double> ds = test::random_dataset(6, 10, 1601);
  SslsConfig<double> cfg;
  cfg.k_target = 7;
  EXPECT_THROW(fit_ssls(ds, cfg), std::invalid_argument);
}

// Fixed stock budget on the correlated-spike design: the two-stage fit with
// the lasso-init adaptive selector recovers the first two coordinates and
// values near the planted (9, 6).
TEST(FitSsls, BudgetTwoOnIcDesign) {
  sim::SimDesign design;
  design.n = 100;
  design.p = 50;
  design.cov = sim::CovKind::ic_violation;
  design.sigma = 1.0;
  design.beta_true = Vec<double>(2);
  design.beta_true << 9, 6;
  int hits = 0;
  for (int rep = 0; rep < 10; ++rep) {
    design.seed = 1700 + rep;
    auto [raw, beta_true] = sim::generate(design);
    auto [ds, rec] = standardize(raw);
    SslsConfig<double> cfg;
    cfg.penalty.gamma = 1.0;
    cfg.penalty.lambda2 = 1e-3;
    cfg.k_target = 2;
    const auto fit = fit_ssls(ds, cfg, initial_estimator(ds, std::optional<double>(1.0)));
    const Vec<double> beta = rec.coef_to_original(fit.beta);
    if (fit.support == SupportSet({0, 1})) {
      ++hits;
      EXPECT_NEAR(beta[0], 9.0, 0.8);
      EXPECT_NEAR(beta[1], 6.0, 0.8);
    }
  }
  EXPECT_GE(hits, 9);
}

// Paired comparison: conditioned on correct selection the refit equals the
// oracle least squares, and under strong signal it beats the shrunk selector.
TEST(FitSsls, RefitMatchesOracleOnCorrectSelection) {
  Vec<double> beta = Vec<double>::Zero(30);
  beta[0] = 9;
  beta[1] = 6;
  int correct = 0;
  double ssls_l2 = 0, selector_l2 = 0;
  for (int rep = 0; rep < 20; ++rep) {
    Dataset<double> raw = test::planted_dataset(80, 30, beta, 1.0, 1800 + rep);
    auto [ds, rec] = standardize(raw);
    const Vec<double> init = initial_estimator(ds, std::optional<double>(1.0));
    SslsConfig<double> cfg;
    cfg.penalty.lambda1 = selection_lambda1<double>(ds.n(), ds.p(), 1.0);
    cfg.penalty.lambda2 = 1e-4;
    PenaltySpec<double> sel_spec = cfg.penalty;
    sel_spec.weights = adaptive_weights(init, 1.0);
    const auto selector = fit_adaptive_elastic_net(ds, sel_spec);
    const auto two_stage = fit_ssls(ds, cfg, init);

    const Vec<double> b_sel = rec.coef_to_original(selector.beta);
    const Vec<double> b_ssls = rec.coef_to_original(two_stage.beta);
    selector_l2 += l2_loss(b_sel, beta);
    ssls_l2 += l2_loss(b_ssls, beta);

    if (two_stage.support == support_of(beta)) {
      ++correct;
      const auto oracle = ols_refit(ds, support_of(beta));
      EXPECT_LT((two_stage.beta - oracle.beta).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
  EXPECT_GE(correct, 15);
  EXPECT_LT(ssls_l2, selector_l2);
}

}  // namespace
}  // namespace aenet
