#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "aenet/dataset.hpp"
#include "aenet/types.hpp"

namespace aenet {

/// Ridge-augmented least-squares problem: sqrt(lambda2) * I stacked below X
/// and a zero-padded response, so that for every b
///   1/2 ||y_tilde - X_tilde b||^2 = 1/2 ||y - X b||^2 + 1/2 lambda2 ||b||^2.
template <class Scalar>
struct AugmentedProblem {
  Mat<Scalar> X_tilde;  // (n + p) x p
  Vec<Scalar> y_tilde;  // n + p
  Scalar lambda2{0};
};

template <class Scalar>
AugmentedProblem<Scalar> augment_design(const Dataset<Scalar>& ds, Scalar lambda2) {
  if (lambda2 < Scalar(0)) throw std::invalid_argument("augment_design: lambda2 must be >= 0");
  const Index n = ds.n();
  const Index p = ds.p();
  AugmentedProblem<Scalar> prob;
  prob.lambda2 = lambda2;
  prob.X_tilde.setZero(n + p, p);
  prob.X_tilde.topRows(n) = ds.X();
  prob.X_tilde.bottomRows(p).diagonal().setConstant(std::sqrt(lambda2));
  prob.y_tilde.setZero(n + p);
  prob.y_tilde.head(n) = ds.y();
  return prob;
}

/// Maps coefficients of a column-rescaled problem back to the original
/// coordinates: b_j = theta_i * scale[kept[i]]; removed columns get 0.
template <class Scalar>
struct RescaleRecord {
  Vec<Scalar> scale;           // length original_p (1 for removed columns)
  std::vector<Index> kept;     // original indices of retained columns
  std::vector<Index> removed;  // columns with zero scale (excluded coordinates)
  Index original_p{0};

  Vec<Scalar> back_transform(const Vec<Scalar>& theta) const {
    if (theta.size() != static_cast<Index>(kept.size()))
      throw std::invalid_argument("back_transform: coefficient length mismatch");
    Vec<Scalar> beta = Vec<Scalar>::Zero(original_p);
    for (std::size_t i = 0; i < kept.size(); ++i)
      beta[kept[i]] = theta[static_cast<Index>(i)] * scale[kept[i]];
    return beta;
  }
};

namespace detail {

/// Rescale columns by explicit per-column factors; factor 0 removes the column.
template <class Scalar>
std::pair<AugmentedProblem<Scalar>, RescaleRecord<Scalar>> rescale_columns_by(
    const AugmentedProblem<Scalar>& prob, const Vec<Scalar>& factors) {
  const Index p = prob.X_tilde.cols();
  if (factors.size() != p) throw std::invalid_argument("rescale: factor length != p");
  RescaleRecord<Scalar> rec;
  rec.original_p = p;
  rec.scale = Vec<Scalar>::Ones(p);
  for (Index j = 0; j < p; ++j) {
    if (factors[j] > Scalar(0) && std::isfinite(factors[j])) {
      rec.scale[j] = factors[j];
      rec.kept.push_back(j);
    } else {
      rec.removed.push_back(j);
    }
  }
  AugmentedProblem<Scalar> out;
  out.lambda2 = prob.lambda2;
  out.y_tilde = prob.y_tilde;
  out.X_tilde.resize(prob.X_tilde.rows(), static_cast<Index>(rec.kept.size()));
  for (std::size_t i = 0; i < rec.kept.size(); ++i) {
    const Index j = rec.kept[i];
    out.X_tilde.col(static_cast<Index>(i)) = prob.X_tilde.col(j) * rec.scale[j];
  }
  return {std::move(out), rec};
}

}  // namespace detail

/// Multiply column j by |beta_init_j|^gamma. Columns with beta_init_j = 0
/// (under the zero tolerance) are removed and recorded; the scale record maps
/// path coefficients back via b_j = theta_j * |beta_init_j|^gamma.
template <class Scalar>
std::pair<AugmentedProblem<Scalar>, RescaleRecord<Scalar>> rescale_columns(
    const AugmentedProblem<Scalar>& prob, const Vec<Scalar>& beta_init, Scalar gamma) {
  if (gamma < Scalar(0)) throw std::invalid_argument("rescale_columns: gamma must be >= 0");
  const Index p = prob.X_tilde.cols();
  if (beta_init.size() != p) throw std::invalid_argument("rescale_columns: beta_init length != p");
  Vec<Scalar> factors(p);
  for (Index j = 0; j < p; ++j) {
    const Scalar a = std::abs(beta_init[j]);
    factors[j] = (a <= Scalar(kZeroTol) && gamma > Scalar(0)) ? Scalar(0) : std::pow(a, gamma);
  }
  if (gamma == Scalar(0)) factors.setOnes();
  return detail::rescale_columns_by(prob, factors);
}

}  // namespace aenet
