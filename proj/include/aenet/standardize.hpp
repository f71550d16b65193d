#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aenet/dataset.hpp"
#include "aenet/types.hpp"

namespace aenet {

/// Centering/scaling record produced by standardize(). Suffices to map
/// standardized-scale coefficients back to the original scale and to
/// reconstruct the original dataset (dropped constant columns included,
/// since their means are retained).
template <class Scalar>
struct StandardizeRecord {
  Vec<Scalar> x_mean;   // length original_p
  Vec<Scalar> x_scale;  // length original_p; scale applied as (x - mean) / scale
  Scalar y_mean{0};
  std::vector<Index> kept;     // original indices of retained columns
  std::vector<Index> dropped;  // original indices of removed zero-variance columns
  Index original_p{0};

  bool is_identity(Scalar tol = Scalar(1e-12)) const {
    if (!dropped.empty() || std::abs(y_mean) > tol) return false;
    return x_mean.cwiseAbs().maxCoeff() <= tol &&
           (x_scale.array() - Scalar(1)).abs().maxCoeff() <= tol;
  }

  /// Map coefficients over the kept (standardized) columns to a length
  /// original_p vector on the original scale.
  Vec<Scalar> coef_to_original(const Vec<Scalar>& beta_std) const {
    if (beta_std.size() != static_cast<Index>(kept.size()))
      throw std::invalid_argument("coef_to_original: coefficient length mismatch");
    Vec<Scalar> out = Vec<Scalar>::Zero(original_p);
    for (std::size_t i = 0; i < kept.size(); ++i)
      out[kept[i]] = beta_std[static_cast<Index>(i)] / x_scale[kept[i]];
    return out;
  }

  /// Intercept implied by centering: yhat = X_orig * beta_orig + intercept.
  Scalar intercept(const Vec<Scalar>& beta_original) const {
    if (beta_original.size() != original_p)
      throw std::invalid_argument("intercept: coefficient length mismatch");
    return y_mean - x_mean.dot(beta_original);
  }
};

/// Center y, center each column of X and scale it so that n^{-1} sum_i x_ij^2 = 1.
/// Zero-variance columns are an error unless drop_constant_columns is set, in
/// which case they are removed and recorded.
template <class Scalar>
std::pair<Dataset<Scalar>, StandardizeRecord<Scalar>> standardize(
    const Dataset<Scalar>& ds, bool drop_constant_columns = false) {
  const Index n = ds.n();
  const Index p = ds.p();
  if (n < 2) throw std::invalid_argument("standardize: need n >= 2");

  StandardizeRecord<Scalar> rec;
  rec.original_p = p;
  rec.x_mean.resize(p);
  rec.x_scale = Vec<Scalar>::Ones(p);
  rec.y_mean = ds.y().mean();

  std::vector<Index> kept;
  for (Index j = 0; j < p; ++j) {
    const Scalar mean = ds.X().col(j).mean();
    rec.x_mean[j] = mean;
    const Scalar ms = (ds.X().col(j).array() - mean).square().sum() / Scalar(n);
    const Scalar scale = std::sqrt(ms);
    if (scale <= Scalar(kZeroTol) * std::max(Scalar(1), std::abs(mean))) {
      if (!drop_constant_columns)
        throw std::invalid_argument("standardize: zero-variance column " + std::to_string(j) +
                                    " (pass drop_constant_columns to remove it)");
      rec.dropped.push_back(j);
      continue;
    }
    rec.x_scale[j] = scale;
    kept.push_back(j);
  }
  if (kept.empty()) throw std::invalid_argument("standardize: all columns have zero variance");
  rec.kept = kept;

  Mat<Scalar> Xs(n, static_cast<Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const Index j = kept[i];
    Xs.col(static_cast<Index>(i)) = (ds.X().col(j).array() - rec.x_mean[j]) / rec.x_scale[j];
  }
  Vec<Scalar> ys = ds.y().array() - rec.y_mean;

  std::vector<std::string> names;
  if (!ds.column_names().empty()) {
    names.reserve(kept.size());
    for (Index j : kept) names.push_back(ds.column_names()[j]);
  }
  return {Dataset<Scalar>(std::move(Xs), std::move(ys), std::move(names)), rec};
}

/// Inverse of standardize: reconstructs the original dataset, restoring
/// dropped constant columns from their recorded means.
template <class Scalar>
Dataset<Scalar> destandardize(const Dataset<Scalar>& std_ds, const StandardizeRecord<Scalar>& rec) {
  if (std_ds.p() != static_cast<Index>(rec.kept.size()))
    throw std::invalid_argument("destandardize: column count does not match record");
  const Index n = std_ds.n();
  Mat<Scalar> X(n, rec.original_p);
  for (Index j = 0; j < rec.original_p; ++j) X.col(j).setConstant(rec.x_mean[j]);
  for (std::size_t i = 0; i < rec.kept.size(); ++i) {
    const Index j = rec.kept[i];
    X.col(j) = std_ds.X().col(static_cast<Index>(i)) * rec.x_scale[j];
    X.col(j).array() += rec.x_mean[j];
  }
  Vec<Scalar> y = std_ds.y().array() + rec.y_mean;
  return Dataset<Scalar>(std::move(X), std::move(y));
}

}  // namespace aenet
