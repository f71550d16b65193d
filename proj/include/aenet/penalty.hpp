#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "aenet/types.hpp"

namespace aenet {

/// Penalty parameters for the weighted elastic-net criterion
///   1/2 ||y - X b||^2 + 1/2 lambda2 ||b||^2 + lambda1 sum_j w_j |b_j|.
/// An empty weights vector means unit weights. A weight of +inf forces the
/// coordinate out of the fit.
template <class Scalar>
struct PenaltySpec {
  Scalar lambda1{0};
  Scalar lambda2{0};
  Scalar gamma{1};
  Vec<Scalar> weights;  // empty = unit

  void validate(Index p) const {
    if (lambda1 < Scalar(0) || lambda2 < Scalar(0) || gamma < Scalar(0))
      throw std::invalid_argument("PenaltySpec: lambda1, lambda2, gamma must be >= 0");
    if (weights.size() != 0) {
      if (weights.size() != p) throw std::invalid_argument("PenaltySpec: weights length != p");
      if (!(weights.array() > Scalar(0)).all())
        throw std::invalid_argument("PenaltySpec: weights must be positive");
    }
  }
};

template <class Scalar>
struct FitResult {
  Vec<Scalar> beta;
  SupportSet support;
  Scalar objective{0};
  Scalar kkt_max_violation{0};
  MethodTag method_tag{MethodTag::adaptive_elastic_net};
};

/// Adaptive weights w_j = |b_j|^{-gamma}; coordinates at zero (under the
/// zero tolerance) get w_j = +inf and are excluded from subsequent fits.
/// gamma = 0 reduces to unit weights.
template <class Scalar>
Vec<Scalar> adaptive_weights(const Vec<Scalar>& beta_init, Scalar gamma) {
  if (gamma < Scalar(0)) throw std::invalid_argument("adaptive_weights: gamma must be >= 0");
  if (gamma == Scalar(0)) return Vec<Scalar>::Ones(beta_init.size());
  Vec<Scalar> w(beta_init.size());
  for (Index j = 0; j < beta_init.size(); ++j) {
    const Scalar a = std::abs(beta_init[j]);
    w[j] = (a <= Scalar(kZeroTol)) ? std::numeric_limits<Scalar>::infinity()
                                   : std::pow(a, -gamma);
  }
  return w;
}

}  // namespace aenet
