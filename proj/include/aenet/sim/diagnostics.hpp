#pragma once

#include <vector>

#include "aenet/penalty.hpp"
#include "aenet/sim/design.hpp"
#include "aenet/types.hpp"

namespace aenet::sim {

enum class InitKind { lasso, marginal };

/// Single-method selection settings used by the diagnostics. The marginal
/// init is beta_init = X'y/n; the lasso init is the rate-lambda lasso.
struct SelectorOptions {
  MethodTag method{MethodTag::adaptive_elastic_net};
  double gamma{1.0};
  double lambda2{1e-4};
  InitKind init{InitKind::lasso};
  bool sigma_from_design{true};
  int workers{1};
};

struct AccuracyPoint {
  Index n{0};
  double accuracy{0};
  double se{0};  // binomial
  int n_ok{0};
  int n_failed{0};
};

/// Selection accuracy (exact support recovery) per sample size.
std::vector<AccuracyPoint> consistency_curve(const SimDesign& base,
                                             const std::vector<Index>& n_grid, int R,
                                             const SelectorOptions& sel);

struct DecayPoint {
  Index n{0};
  double aen_bias2{0}, aen_mse{0};
  double ssls_bias2{0}, ssls_mse{0};
  double oracle_mse{0};  // sigma^2 * mean_r tr((X_S' X_S)^{-1}) on the true support
  double ssls_accuracy{0};
  int n_ok{0};
};

/// Empirical bias^2 and MSE per sample size for the penalized estimator and
/// its OLS-refit counterpart, next to the oracle least-squares MSE.
std::vector<DecayPoint> error_decay(const SimDesign& base, const std::vector<Index>& n_grid,
                                    int R, const SelectorOptions& sel);

struct NormalityDiag {
  std::vector<double> sample;
  double mean{0};
  double variance{0};
  double ks_stat{0};
  int retained{0};
  int total{0};
};

/// Distribution diagnostic for the standardized refit statistic
///   T_r = alpha' (X_S' X_S)^{1/2} (beta_hat_S - beta_S) / sigma
/// over replications restricted to exact-recovery draws. With
/// method = adaptive_elastic_net the penalized estimate is used instead of
/// the refit (it carries the shrinkage bias).
NormalityDiag normality_diag(const SimDesign& design, int R, const Vec<double>& alpha,
                             const SelectorOptions& sel);

struct IcPathRates {
  double aen_rate{0};
  double lasso_rate{0};
  int R{0};
};

/// Irrepresentable-condition demonstration: fraction of replications whose
/// adaptive-elastic-net path (resp. plain lasso path) contains a breakpoint
/// with support exactly equal to the true support.
IcPathRates ic_path_rates(const SimDesign& design, int R, double lambda2, double gamma,
                          InitKind init, int workers);

/// Kolmogorov-Smirnov distance of a sample to the standard normal.
double ks_statistic_normal(std::vector<double> sample);

}  // namespace aenet::sim
