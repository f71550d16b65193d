#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "aenet/augment.hpp"
#include "aenet/dataset.hpp"
#include "aenet/lars.hpp"
#include "aenet/penalty.hpp"
#include "aenet/types.hpp"

namespace aenet {

namespace detail {

template <class Scalar>
Vec<Scalar> resolve_weights(const PenaltySpec<Scalar>& spec, const Vec<Scalar>& beta_init,
                            Index p) {
  if (spec.weights.size() != 0) return spec.weights;
  if (beta_init.size() == 0 || spec.gamma == Scalar(0)) return Vec<Scalar>::Ones(p);
  if (beta_init.size() != p)
    throw std::invalid_argument("fit: beta_init length != p");
  return adaptive_weights(beta_init, spec.gamma);
}

inline Index default_max_steps(Index m, Index p) {
  return 8 * std::min(m, p) + 64;
}

}  // namespace detail

/// Value of 1/2 ||y - X b||^2 + 1/2 lambda2 ||b||^2 + lambda1 sum_j w_j |b_j|.
/// Coordinates with infinite weight contribute 0 when b_j = 0 and +inf otherwise.
template <class Scalar>
Scalar elastic_net_objective(const Dataset<Scalar>& ds, const PenaltySpec<Scalar>& spec,
                             const Vec<Scalar>& beta, const Vec<Scalar>& weights) {
  Scalar penalty = 0;
  for (Index j = 0; j < beta.size(); ++j) {
    if (beta[j] == Scalar(0)) continue;
    if (!std::isfinite(weights[j])) return std::numeric_limits<Scalar>::infinity();
    penalty += weights[j] * std::abs(beta[j]);
  }
  return Scalar(0.5) * (ds.y() - ds.X() * beta).squaredNorm() +
         Scalar(0.5) * spec.lambda2 * beta.squaredNorm() + spec.lambda1 * penalty;
}

/// Largest KKT violation of beta for the weighted elastic-net criterion.
/// With g = X'(y - X b) - lambda2 * b, active coordinates must satisfy
/// g_j / w_j = lambda1 * sign(b_j) (in particular |g_j| / w_j = lambda1) and
/// inactive ones |g_j| / w_j <= lambda1.
template <class Scalar>
Scalar kkt_check(const Dataset<Scalar>& ds, const PenaltySpec<Scalar>& spec,
                 const Vec<Scalar>& beta) {
  if (beta.size() != ds.p()) throw std::invalid_argument("kkt_check: beta length != p");
  const Vec<Scalar> w =
      spec.weights.size() != 0 ? spec.weights : Vec<Scalar>::Ones(ds.p()).eval();
  const Vec<Scalar> g =
      ds.X().transpose() * (ds.y() - ds.X() * beta) - spec.lambda2 * beta;
  Scalar viol = 0;
  for (Index j = 0; j < ds.p(); ++j) {
    const Scalar scaled = std::isfinite(w[j]) ? g[j] / w[j] : Scalar(0);
    if (std::abs(beta[j]) > Scalar(kZeroTol)) {
      const Scalar sign = beta[j] > Scalar(0) ? Scalar(1) : Scalar(-1);
      viol = std::max(viol, std::abs(scaled - spec.lambda1 * sign));
    } else {
      viol = std::max(viol, std::max(Scalar(0), std::abs(scaled) - spec.lambda1));
    }
  }
  return viol;
}

/// Minimizer of 1/2||y - Xb||^2 + 1/2 lambda2 ||b||^2 + lambda1 sum_j w_j |b_j|,
/// computed by ridge augmentation, adaptive column rescaling, the lasso
/// homotopy stopped at lambda1, and back-transformation. Weights come from
/// spec.weights when set, otherwise from |beta_init|^{-gamma} (unit weights
/// when beta_init is empty).
template <class Scalar>
FitResult<Scalar> fit_adaptive_elastic_net(const Dataset<Scalar>& ds,
                                           const PenaltySpec<Scalar>& spec,
                                           const Vec<Scalar>& beta_init = Vec<Scalar>(),
                                           Index max_steps = -1) {
  const Index n = ds.n();
  const Index p = ds.p();
  spec.validate(p);
  const Vec<Scalar> w = detail::resolve_weights(spec, beta_init, p);

  FitResult<Scalar> out;
  out.method_tag = MethodTag::adaptive_elastic_net;

  if (spec.lambda1 == Scalar(0)) {
    // Unpenalized-l1 limit: plain ridge (or least squares) on the kept columns.
    std::vector<Index> kept;
    for (Index j = 0; j < p; ++j)
      if (std::isfinite(w[j])) kept.push_back(j);
    Mat<Scalar> Xk(n, static_cast<Index>(kept.size()));
    for (std::size_t i = 0; i < kept.size(); ++i)
      Xk.col(static_cast<Index>(i)) = ds.X().col(kept[i]);
    Vec<Scalar> bk;
    if (spec.lambda2 > Scalar(0)) {
      Mat<Scalar> G = Xk.transpose() * Xk;
      G.diagonal().array() += spec.lambda2;
      bk = Eigen::LDLT<Mat<Scalar>>(G).solve(Xk.transpose() * ds.y());
    } else {
      bk = Xk.completeOrthogonalDecomposition().solve(ds.y());
    }
    out.beta = Vec<Scalar>::Zero(p);
    for (std::size_t i = 0; i < kept.size(); ++i)
      out.beta[kept[i]] = bk[static_cast<Index>(i)];
  } else {
    if (max_steps < 0) max_steps = detail::default_max_steps(n + p, p);
    RegularizationPath<Scalar> path =
        weighted_path(ds, spec.lambda2, w, max_steps, spec.lambda1);
    if (path.truncated)
      throw std::runtime_error("fit: homotopy exhausted max_steps before reaching lambda1");
    out.beta = path.at(spec.lambda1);
  }

  out.support = support_of(out.beta);
  out.objective = elastic_net_objective(ds, spec, out.beta, w);
  PenaltySpec<Scalar> eff = spec;
  eff.weights = w;
  out.kkt_max_violation = kkt_check(ds, eff, out.beta);
  return out;
}

/// Rate-driven selection level: lambda_n = 4 sigma sqrt(log(p)/n) on the
/// 1/(2n)-scaled lasso criterion, multiplied by n for the 1/2-scaled solver.
template <class Scalar>
Scalar selection_lambda1(Index n, Index p, Scalar sigma) {
  return Scalar(4) * sigma *
         std::sqrt(static_cast<Scalar>(n) * std::log(static_cast<Scalar>(p)));
}

/// Residual-scale estimate from a pilot lasso at the unit-variance level
/// sqrt(2 log(p)/n): sigma^2 = RSS / (n - |support|) with the pilot support
/// capped at n/2 active variables (keeps the degrees of freedom positive when
/// p >= n) and the variance clipped below at 1e-6.
template <class Scalar>
Scalar estimate_noise_sd(const Dataset<Scalar>& ds) {
  const Index n = ds.n();
  const Index p = ds.p();
  const Vec<Scalar> unit = Vec<Scalar>::Ones(p);
  const Scalar lam_pilot =
      std::sqrt(Scalar(2) * static_cast<Scalar>(n) * std::log(static_cast<Scalar>(p)));
  RegularizationPath<Scalar> pilot =
      lars_path(ds, unit, detail::default_max_steps(n, p), lam_pilot);
  Vec<Scalar> beta_pilot = pilot.at(lam_pilot);
  const std::size_t cap = static_cast<std::size_t>(std::max<Index>(1, n / 2));
  if (support_of(beta_pilot).size() > cap) {
    for (const auto& bp : pilot.breakpoints) {
      if (bp.support.size() <= cap) beta_pilot = bp.beta;
      else break;
    }
  }
  const Scalar rss = (ds.y() - ds.X() * beta_pilot).squaredNorm();
  const Index df = std::max<Index>(1, n - static_cast<Index>(support_of(beta_pilot).size()));
  return std::sqrt(std::max(rss / static_cast<Scalar>(df), Scalar(1e-6)));
}

/// Lasso initial estimator at selection_lambda1(n, p, sigma_hat), with
/// sigma_hat estimated by estimate_noise_sd when not supplied.
template <class Scalar>
Vec<Scalar> initial_estimator(const Dataset<Scalar>& ds,
                              std::optional<Scalar> sigma_hat = std::nullopt) {
  const Index n = ds.n();
  const Index p = ds.p();
  if (sigma_hat && !(*sigma_hat > Scalar(0)))
    throw std::invalid_argument("initial_estimator: sigma_hat must be > 0");
  const Scalar sigma = sigma_hat ? *sigma_hat : estimate_noise_sd(ds);
  const Scalar lam = selection_lambda1<Scalar>(n, p, sigma);
  RegularizationPath<Scalar> path =
      lars_path(ds, Vec<Scalar>::Ones(p).eval(), detail::default_max_steps(n, p), lam);
  return path.at(lam);
}

}  // namespace aenet
