#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "aenet/dataset.hpp"
#include "aenet/lars.hpp"
#include "aenet/penalty.hpp"
#include "aenet/solve.hpp"
#include "aenet/types.hpp"

namespace aenet {

/// Selection-stage configuration for the two-stage estimator. Exactly one of
/// {penalty.lambda1, k_target} drives selection: with k_target set, the
/// support comes from select_k on the selector's path; otherwise from the
/// solution at penalty.lambda1.
template <class Scalar>
struct SslsConfig {
  MethodTag selector{MethodTag::adaptive_elastic_net};
  PenaltySpec<Scalar> penalty;
  std::optional<Index> k_target;
};

/// Least-squares refit on a fixed support: b_j is the OLS coefficient for
/// j in the support and 0 elsewhere. The residual is orthogonal to every
/// selected column. Rank deficiency on the support is an error.
template <class Scalar>
FitResult<Scalar> ols_refit(const Dataset<Scalar>& ds, const SupportSet& support) {
  const Index n = ds.n();
  const Index p = ds.p();
  support.validate_for(p);
  const Index q = static_cast<Index>(support.size());
  if (q > n)
    throw std::invalid_argument("ols_refit: support size " + std::to_string(q) +
                                " exceeds n=" + std::to_string(n));

  FitResult<Scalar> out;
  out.method_tag = MethodTag::ols;
  out.support = support;
  out.beta = Vec<Scalar>::Zero(p);
  if (q == 0) {
    out.objective = Scalar(0.5) * ds.y().squaredNorm();
    out.kkt_max_violation = Scalar(0);
    return out;
  }

  Mat<Scalar> Xs(n, q);
  for (Index i = 0; i < q; ++i) Xs.col(i) = ds.X().col(support.indices()[i]);

  Eigen::ColPivHouseholderQR<Mat<Scalar>> qr(Xs);
  qr.setThreshold(Scalar(1e-10));
  if (qr.rank() < q) {
    std::string dep;
    const auto& perm = qr.colsPermutation().indices();
    for (Index i = qr.rank(); i < q; ++i) {
      if (!dep.empty()) dep += ", ";
      dep += std::to_string(support.indices()[perm[i]]);
    }
    throw std::runtime_error("ols_refit: selected columns are rank deficient (dependent: " +
                             dep + ")");
  }
  const Vec<Scalar> bs = qr.solve(ds.y());
  for (Index i = 0; i < q; ++i) out.beta[support.indices()[i]] = bs[i];

  const Vec<Scalar> r = ds.y() - Xs * bs;
  out.objective = Scalar(0.5) * r.squaredNorm();
  out.kkt_max_violation = (Xs.transpose() * r).template lpNorm<Eigen::Infinity>();
  return out;
}

/// Two-stage estimator: run the configured penalized selector to obtain the
/// support, then refit the selected coordinates by ordinary least squares.
/// The result's support equals the selector's support exactly.
template <class Scalar>
FitResult<Scalar> fit_ssls(const Dataset<Scalar>& ds, const SslsConfig<Scalar>& cfg,
                           const Vec<Scalar>& beta_init = Vec<Scalar>()) {
  const Index p = ds.p();
  PenaltySpec<Scalar> eff = cfg.penalty;
  switch (cfg.selector) {
    case MethodTag::lasso:
      eff.lambda2 = Scalar(0);
      eff.weights = Vec<Scalar>::Ones(p);
      break;
    case MethodTag::elastic_net:
      eff.weights = Vec<Scalar>::Ones(p);
      break;
    case MethodTag::adaptive_lasso:
      eff.lambda2 = Scalar(0);
      eff.weights = detail::resolve_weights(eff, beta_init, p);
      break;
    case MethodTag::adaptive_elastic_net:
      eff.weights = detail::resolve_weights(eff, beta_init, p);
      break;
    default:
      throw std::invalid_argument("fit_ssls: selector must be a penalized method");
  }

  SupportSet selected;
  if (cfg.k_target) {
    const Index k = *cfg.k_target;
    if (k < 1) throw std::invalid_argument("fit_ssls: k_target must be >= 1");
    if (k > ds.n())
      throw std::invalid_argument("fit_ssls: k_target exceeds n, refit would be singular");
    const Index max_steps = detail::default_max_steps(ds.n() + p, p);
    RegularizationPath<Scalar> path =
        weighted_path(ds, eff.lambda2, eff.weights, max_steps, Scalar(0), k + 8);
    selected = select_k(path, k);
  } else {
    selected = fit_adaptive_elastic_net(ds, eff).support;
  }

  FitResult<Scalar> out = ols_refit(ds, selected);
  out.method_tag = MethodTag::ssls;
  out.support = selected;
  return out;
}

}  // namespace aenet
