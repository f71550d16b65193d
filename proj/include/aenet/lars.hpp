#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aenet/augment.hpp"
#include "aenet/dataset.hpp"
#include "aenet/types.hpp"

namespace aenet {

template <class Scalar>
struct PathBreakpoint {
  Scalar lambda1{0};
  Vec<Scalar> beta;
  SupportSet support;
};

/// Piecewise-linear l1 solution path. Breakpoints are ordered by strictly
/// decreasing lambda1, starting at the all-zero solution; between consecutive
/// breakpoints the solution is affine in lambda1.
template <class Scalar>
struct RegularizationPath {
  std::vector<PathBreakpoint<Scalar>> breakpoints;
  Index p{0};
  bool truncated{false};

  Scalar lambda_max() const {
    if (breakpoints.empty()) throw std::logic_error("RegularizationPath: empty path");
    return breakpoints.front().lambda1;
  }

  /// Exact solution at any lambda1 covered by the path (affine segments).
  Vec<Scalar> at(Scalar lambda1) const {
    if (breakpoints.empty()) throw std::logic_error("RegularizationPath: empty path");
    if (lambda1 < Scalar(0)) throw std::invalid_argument("RegularizationPath: lambda1 < 0");
    if (lambda1 >= breakpoints.front().lambda1) return Vec<Scalar>::Zero(p);
    const auto& last = breakpoints.back();
    const Scalar end_tol = breakpoints.front().lambda1 * Scalar(1e-14);
    if (lambda1 < last.lambda1 - end_tol)
      throw std::domain_error("RegularizationPath: path " +
                              std::string(truncated ? "truncated" : "stopped") +
                              " before lambda1=" + std::to_string(static_cast<double>(lambda1)));
    if (lambda1 <= last.lambda1) return last.beta;
    std::size_t i = 1;
    while (i + 1 < breakpoints.size() && breakpoints[i].lambda1 > lambda1) ++i;
    const auto& hi_bp = breakpoints[i - 1];  // larger lambda
    const auto& lo_bp = breakpoints[i];      // smaller lambda
    const Scalar span = hi_bp.lambda1 - lo_bp.lambda1;
    if (span <= Scalar(0)) return lo_bp.beta;
    const Scalar t = (hi_bp.lambda1 - lambda1) / span;
    return hi_bp.beta + t * (lo_bp.beta - hi_bp.beta);
  }
};

namespace detail {

/// Append a column to the Cholesky factor L of the active Gram matrix.
/// Returns false when the new column is numerically dependent on the
/// active ones.
template <class Scalar>
bool cholesky_append(Mat<Scalar>& L, Index k, const Vec<Scalar>& gram_col, Scalar diag) {
  if (L.rows() <= k) {
    Mat<Scalar> grown = Mat<Scalar>::Zero(std::max<Index>(2 * L.rows(), k + 8),
                                          std::max<Index>(2 * L.cols(), k + 8));
    grown.topLeftCorner(L.rows(), L.cols()) = L;
    L.swap(grown);
  }
  Scalar h2 = diag;
  if (k > 0) {
    Vec<Scalar> l = L.topLeftCorner(k, k)
                        .template triangularView<Eigen::Lower>()
                        .solve(gram_col.head(k));
    h2 = diag - l.squaredNorm();
    L.row(k).head(k) = l.transpose();
  }
  if (!(h2 > diag * Scalar(1e-12)) || !(h2 > Scalar(0))) return false;
  L(k, k) = std::sqrt(h2);
  return true;
}

template <class Scalar>
Vec<Scalar> cholesky_solve(const Mat<Scalar>& L, Index k, const Vec<Scalar>& rhs) {
  Vec<Scalar> z = L.topLeftCorner(k, k).template triangularView<Eigen::Lower>().solve(rhs);
  return L.topLeftCorner(k, k)
      .template triangularView<Eigen::Lower>()
      .transpose()
      .solve(z);
}

}  // namespace detail

/// Homotopy form of LARS with the lasso modification for
///   min 1/2 ||y - X theta||^2 + lambda ||theta||_1.
/// Each segment is computed from an exact active-set solve, so breakpoint
/// solutions satisfy the KKT conditions to solver precision. Variables leave
/// the active set when their coefficient crosses zero. The path runs until
/// lambda reaches stop_lambda (a terminal breakpoint is placed there) or
/// max_steps is exhausted (path flagged truncated). When stop_active > 0 the
/// path is cut (flagged truncated) once more than stop_active variables are
/// active.
template <class Scalar>
RegularizationPath<Scalar> lasso_homotopy(const Mat<Scalar>& X, const Vec<Scalar>& y,
                                          Scalar stop_lambda, Index max_steps,
                                          Index stop_active = -1) {
  const Index m = X.rows();
  const Index p = X.cols();
  if (max_steps < 1) throw std::invalid_argument("lasso_homotopy: max_steps must be >= 1");

  RegularizationPath<Scalar> path;
  path.p = p;

  const Vec<Scalar> cy = X.transpose() * y;
  Scalar lam_max = 0;
  for (Index j = 0; j < p; ++j) lam_max = std::max(lam_max, std::abs(cy[j]));

  path.breakpoints.push_back({lam_max, Vec<Scalar>::Zero(p), SupportSet{}});
  if (p == 0 || lam_max <= stop_lambda || lam_max == Scalar(0)) {
    if (stop_lambda < lam_max)
      path.breakpoints.push_back({stop_lambda, Vec<Scalar>::Zero(p), SupportSet{}});
    return path;
  }

  const Scalar lam_floor = lam_max * Scalar(1e-14);
  const Scalar min_event = std::max(stop_lambda, lam_floor);

  std::vector<Index> active;
  std::vector<char> is_active(p, 0);
  Vec<Scalar> signs = Vec<Scalar>::Zero(0);
  Mat<Scalar> L = Mat<Scalar>::Zero(8, 8);

  auto append_active = [&](Index j, Scalar sign, Index step) {
    const Index k = static_cast<Index>(active.size());
    Vec<Scalar> gram_col(k);
    for (Index i = 0; i < k; ++i) gram_col[i] = X.col(active[i]).dot(X.col(j));
    const Scalar diag = X.col(j).squaredNorm();
    if (!detail::cholesky_append(L, k, gram_col, diag))
      throw std::runtime_error("lars: active gram matrix rank-degenerate at step " +
                               std::to_string(step) + " when adding column " + std::to_string(j));
    active.push_back(j);
    is_active[j] = 1;
    signs.conservativeResize(k + 1);
    signs[k] = sign;
  };

  auto rebuild_cholesky = [&](Index step) {
    const Index k = static_cast<Index>(active.size());
    Mat<Scalar> G(k, k);
    for (Index a = 0; a < k; ++a)
      for (Index b = 0; b <= a; ++b) G(a, b) = G(b, a) = X.col(active[a]).dot(X.col(active[b]));
    Eigen::LLT<Mat<Scalar>> llt(G);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("lars: active gram matrix rank-degenerate at step " +
                               std::to_string(step));
    L.topLeftCorner(k, k) = llt.matrixL();
  };

  auto record_knot = [&](Scalar lam, Vec<Scalar> theta) {
    SupportSet supp = support_of(theta);
    auto& bps = path.breakpoints;
    if (!bps.empty() && bps.back().lambda1 - lam <= bps.back().lambda1 * Scalar(1e-14)) {
      bps.back() = {lam, std::move(theta), std::move(supp)};
    } else {
      bps.push_back({lam, std::move(theta), std::move(supp)});
    }
  };

  // First entrant: largest |X'y|, lowest index on ties.
  {
    Index j0 = 0;
    Scalar best = -1;
    for (Index j = 0; j < p; ++j) {
      if (std::abs(cy[j]) > best * (Scalar(1) + Scalar(1e-12))) {
        best = std::abs(cy[j]);
        j0 = j;
      }
    }
    append_active(j0, cy[j0] > 0 ? Scalar(1) : Scalar(-1), 0);
  }

  Scalar lam = lam_max;
  Index dropped_at_current_lambda = -1;
  Scalar dropped_lambda = 0;
  Vec<Scalar> beta_ols, dir, r0, u, c0, a;

  for (Index step = 1;; ++step) {
    if (step > max_steps) {
      path.truncated = true;
      return path;
    }
    // A just-dropped column sits exactly on the correlation boundary; it may
    // only re-enter strictly below the lambda it was dropped at.
    if (dropped_at_current_lambda >= 0 && lam < dropped_lambda * (Scalar(1) - Scalar(1e-12)))
      dropped_at_current_lambda = -1;
    const Index k = static_cast<Index>(active.size());

    Vec<Scalar> xty(k), s(k);
    for (Index i = 0; i < k; ++i) xty[i] = cy[active[i]];
    s = signs.head(k);
    beta_ols = detail::cholesky_solve(L, k, xty);
    dir = detail::cholesky_solve(L, k, s);

    // Residual and direction correlations for the whole segment:
    //   c_j(lam) = c0_j + lam * a_j for every column j.
    r0 = y;
    u.setZero(m);
    for (Index i = 0; i < k; ++i) {
      r0 -= beta_ols[i] * X.col(active[i]);
      u += dir[i] * X.col(active[i]);
    }
    c0 = X.transpose() * r0;
    a = X.transpose() * u;

    // Self-check at the current lambda: after clustered (near-simultaneous)
    // events the one-at-a-time bookkeeping can leave a coordinate just past
    // its crossing. Repair in place: drop a wrong-signed active coordinate,
    // or enter the most violated inactive one, at lam itself. Exact
    // arithmetic never takes these branches.
    {
      // Violation thresholds sit above solve roundoff: relative to each
      // coefficient's own magnitude for signs, and to the initial
      // correlation scale for boundary excesses.
      const Scalar tol = std::max(lam * Scalar(1e-9), lam_max * Scalar(1e-13));
      Index bad_active = -1;
      Scalar worst = 0;
      for (Index i = 0; i < k; ++i) {
        const Scalar value = beta_ols[i] - lam * dir[i];
        const Scalar scale =
            std::abs(beta_ols[i]) + lam * std::abs(dir[i]) + Scalar(1e-300);
        const Scalar viol = -value * signs[i];
        if (viol > scale * Scalar(1e-9) && viol > worst) {
          worst = viol;
          bad_active = i;
        }
      }
      if (bad_active >= 0) {
        const Index j_drop = active[bad_active];
        Vec<Scalar> theta = Vec<Scalar>::Zero(p);
        for (Index i = 0; i < k; ++i) theta[active[i]] = beta_ols[i] - lam * dir[i];
        theta[j_drop] = Scalar(0);
        record_knot(lam, std::move(theta));
        active.erase(active.begin() + bad_active);
        is_active[j_drop] = 0;
        for (Index i = bad_active; i + 1 < k; ++i) signs[i] = signs[i + 1];
        signs.conservativeResize(k - 1);
        rebuild_cholesky(step);
        dropped_at_current_lambda = j_drop;
        dropped_lambda = lam;
        continue;
      }
      if (k < std::min(m, p)) {
        Index bad_inactive = -1;
        Scalar worst_in = tol;
        for (Index j = 0; j < p; ++j) {
          if (is_active[j] || j == dropped_at_current_lambda) continue;
          const Scalar excess = std::abs(c0[j] + lam * a[j]) - lam;
          if (excess > worst_in) {
            worst_in = excess;
            bad_inactive = j;
          }
        }
        // A coefficient path can touch zero and bounce: the just-dropped
        // coordinate sits exactly on the boundary and must come straight
        // back when its correlation would exceed the boundary below lam,
        // i.e. when sign(c_j) * a_j < 1.
        if (bad_inactive < 0 && dropped_at_current_lambda >= 0) {
          const Index j = dropped_at_current_lambda;
          const Scalar c_now = c0[j] + lam * a[j];
          const Scalar sign_c = c_now > 0 ? Scalar(1) : Scalar(-1);
          if (std::abs(c_now) > lam * (Scalar(1) - Scalar(1e-7)) &&
              sign_c * a[j] < Scalar(1) - Scalar(1e-9)) {
            bad_inactive = j;
          }
        }
        if (bad_inactive >= 0) {
          Vec<Scalar> theta = Vec<Scalar>::Zero(p);
          for (Index i = 0; i < k; ++i) theta[active[i]] = beta_ols[i] - lam * dir[i];
          record_knot(lam, std::move(theta));
          const Scalar c_now = c0[bad_inactive] + lam * a[bad_inactive];
          append_active(bad_inactive, c_now > 0 ? Scalar(1) : Scalar(-1), step);
          dropped_at_current_lambda = -1;
          continue;
        }
      }
    }

    // Next entry: largest lambda < current where an inactive column reaches
    // the boundary |c_j(lam)| = lam. Lowest index wins ties. At saturation
    // (k = min(m, p)) the residual is zero and no entry can occur; skipping
    // the scan avoids chasing roundoff-level correlations into a dependent
    // column.
    Scalar best_entry = -1;
    Index entry_j = -1;
    Scalar entry_sign = 0;
    if (k < std::min(m, p)) {
      for (Index j = 0; j < p; ++j) {
        if (is_active[j]) continue;
        // A just-dropped column touches the boundary at the drop lambda;
        // admit only crossings strictly below it (e.g. at the opposite sign).
        const Scalar cap = j == dropped_at_current_lambda
                               ? lam * (Scalar(1) - Scalar(1e-10))
                               : lam * (Scalar(1) + Scalar(1e-10));
        const Scalar cand_pos = c0[j] / (Scalar(1) - a[j]);
        const Scalar cand_neg = -c0[j] / (Scalar(1) + a[j]);
        for (int side = 0; side < 2; ++side) {
          const Scalar cand = side == 0 ? cand_pos : cand_neg;
          if (!(cand > min_event) || !(cand <= cap)) continue;
          if (cand > best_entry * (Scalar(1) + Scalar(1e-12))) {
            best_entry = cand;
            entry_j = j;
            entry_sign = side == 0 ? Scalar(1) : Scalar(-1);
          }
        }
      }
    }

    // Next drop: largest lambda strictly inside the segment where an active
    // coefficient crosses zero.
    Scalar best_drop = -1;
    Index drop_pos = -1;
    for (Index i = 0; i < k; ++i) {
      if (dir[i] == Scalar(0)) continue;
      const Scalar cand = beta_ols[i] / dir[i];
      if (cand > min_event && cand < lam * (Scalar(1) - Scalar(1e-12)) &&
          cand > best_drop) {
        best_drop = cand;
        drop_pos = i;
      }
    }

    const bool do_drop = drop_pos >= 0 && best_drop >= best_entry;
    const Scalar event = do_drop ? best_drop : best_entry;

    if (event <= min_event || (entry_j < 0 && drop_pos < 0)) {
      // No further event above the stop lambda: terminal breakpoint.
      Vec<Scalar> theta = Vec<Scalar>::Zero(p);
      for (Index i = 0; i < k; ++i) theta[active[i]] = beta_ols[i] - stop_lambda * dir[i];
      record_knot(stop_lambda, std::move(theta));
      return path;
    }

    const Scalar lam_evt = std::min(event, lam);
    Vec<Scalar> theta = Vec<Scalar>::Zero(p);
    for (Index i = 0; i < k; ++i) theta[active[i]] = beta_ols[i] - lam_evt * dir[i];

    if (do_drop) {
      const Index j_drop = active[drop_pos];
      theta[j_drop] = Scalar(0);
      record_knot(lam_evt, std::move(theta));
      active.erase(active.begin() + drop_pos);
      is_active[j_drop] = 0;
      for (Index i = drop_pos; i + 1 < k; ++i) signs[i] = signs[i + 1];
      signs.conservativeResize(k - 1);
      rebuild_cholesky(step);
      dropped_at_current_lambda = j_drop;
      dropped_lambda = lam_evt;
    } else {
      record_knot(lam_evt, std::move(theta));
      append_active(entry_j, entry_sign, step);
      if (stop_active > 0 && static_cast<Index>(active.size()) > stop_active) {
        path.truncated = true;
        return path;
      }
    }
    lam = lam_evt;
  }
}

/// Weighted-l1 path of
///   min 1/2 ||y - X b||^2 + 1/2 lambda2 ||b||^2 + lambda1 sum_j w_j |b_j|
/// over lambda1: ridge augmentation when lambda2 > 0, column rescaling by
/// 1/w_j (infinite-weight columns removed), plain homotopy, breakpoints mapped
/// back to the original coordinates.
template <class Scalar>
RegularizationPath<Scalar> weighted_path(const Dataset<Scalar>& ds, Scalar lambda2,
                                         const Vec<Scalar>& weights, Index max_steps,
                                         Scalar stop_lambda = Scalar(0),
                                         Index stop_active = -1) {
  const Index p = ds.p();
  if (weights.size() != p) throw std::invalid_argument("weighted_path: weights length != p");
  if (!(weights.array() > Scalar(0)).all())
    throw std::invalid_argument("weighted_path: weights must be positive");

  AugmentedProblem<Scalar> prob;
  if (lambda2 > Scalar(0)) {
    prob = augment_design(ds, lambda2);
  } else if (lambda2 == Scalar(0)) {
    prob = AugmentedProblem<Scalar>{ds.X(), ds.y(), Scalar(0)};
  } else {
    throw std::invalid_argument("weighted_path: lambda2 must be >= 0");
  }

  Vec<Scalar> factors(p);
  for (Index j = 0; j < p; ++j)
    factors[j] = std::isfinite(weights[j]) ? Scalar(1) / weights[j] : Scalar(0);
  auto [scaled, rec] = detail::rescale_columns_by(prob, factors);

  RegularizationPath<Scalar> theta_path = lasso_homotopy<Scalar>(
      scaled.X_tilde, scaled.y_tilde, stop_lambda, max_steps, stop_active);

  RegularizationPath<Scalar> path;
  path.p = p;
  path.truncated = theta_path.truncated;
  path.breakpoints.reserve(theta_path.breakpoints.size());
  for (auto& bp : theta_path.breakpoints) {
    Vec<Scalar> beta = rec.back_transform(bp.beta);
    SupportSet supp = support_of(beta);
    path.breakpoints.push_back({bp.lambda1, std::move(beta), std::move(supp)});
  }
  return path;
}

/// Lasso path for the weighted-l1 problem (no ridge term): rescale column j
/// by 1/w_j, run the plain path, map breakpoints back. Columns with infinite
/// weight are excluded. The dataset is expected to be standardized.
template <class Scalar>
RegularizationPath<Scalar> lars_path(const Dataset<Scalar>& ds, const Vec<Scalar>& weights,
                                     Index max_steps, Scalar stop_lambda = Scalar(0)) {
  return weighted_path(ds, Scalar(0), weights, max_steps, stop_lambda);
}

/// Support of size k from a path: the first (largest-lambda1) breakpoint with
/// exactly k active coefficients, or, when the path skips size k, the first
/// breakpoint with more than k truncated to the k largest |beta_j| (ties to
/// the lower index). Errors when the path never reaches k active variables.
template <class Scalar>
SupportSet select_k(const RegularizationPath<Scalar>& path, Index k) {
  if (k < 1) throw std::invalid_argument("select_k: k must be >= 1");
  std::size_t max_size = 0;
  const PathBreakpoint<Scalar>* first_larger = nullptr;
  for (const auto& bp : path.breakpoints) {
    const std::size_t sz = bp.support.size();
    if (sz == static_cast<std::size_t>(k)) return bp.support;
    if (sz > static_cast<std::size_t>(k) && first_larger == nullptr) first_larger = &bp;
    max_size = std::max(max_size, sz);
  }
  if (first_larger == nullptr)
    throw std::runtime_error("select_k: path reaches at most " + std::to_string(max_size) +
                             " active variables, requested k=" + std::to_string(k));
  std::vector<Index> idx = first_larger->support.indices();
  std::stable_sort(idx.begin(), idx.end(), [&](Index i, Index j) {
    return std::abs(first_larger->beta[i]) > std::abs(first_larger->beta[j]);
  });
  idx.resize(static_cast<std::size_t>(k));
  return SupportSet::from_unsorted(std::move(idx));
}

}  // namespace aenet
