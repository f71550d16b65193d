#pragma once

#include <stdexcept>

#include "aenet/types.hpp"

namespace aenet {

namespace detail {
template <class Scalar>
void check_same_length(const Vec<Scalar>& a, const Vec<Scalar>& b, const char* what) {
  if (a.size() != b.size()) throw std::invalid_argument(std::string(what) + ": length mismatch");
}
}  // namespace detail

/// sum_j |a_j - b_j|
template <class Scalar>
Scalar l1_loss(const Vec<Scalar>& beta_hat, const Vec<Scalar>& beta_true) {
  detail::check_same_length(beta_hat, beta_true, "l1_loss");
  return (beta_hat - beta_true).template lpNorm<1>();
}

/// sum_j (a_j - b_j)^2, i.e. the squared l2 norm of the difference.
template <class Scalar>
Scalar l2_loss(const Vec<Scalar>& beta_hat, const Vec<Scalar>& beta_true) {
  detail::check_same_length(beta_hat, beta_true, "l2_loss");
  return (beta_hat - beta_true).squaredNorm();
}

}  // namespace aenet
