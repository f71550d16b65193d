#pragma once

#include <cstdint>

#include "aenet/dataset.hpp"
#include "aenet/rng.hpp"
#include "aenet/types.hpp"

namespace aenet::test {

inline Mat<double> random_matrix(Index n, Index p, Rng& rng) {
  Mat<double> X(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) X(i, j) = rng.normal();
  return X;
}

inline Vec<double> random_vector(Index n, Rng& rng) {
  Vec<double> v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

inline Dataset<double> random_dataset(Index n, Index p, std::uint64_t seed) {
  Rng rng(seed);
  Mat<double> X = random_matrix(n, p, rng);
  Vec<double> y = random_vector(n, rng);
  return Dataset<double>(std::move(X), std::move(y));
}

/// Random instance with a planted sparse signal.
inline Dataset<double> planted_dataset(Index n, Index p, const Vec<double>& beta, double sigma,
                                       std::uint64_t seed) {
  Rng rng(seed);
  Mat<double> X = random_matrix(n, p, rng);
  Vec<double> y = X * beta;
  for (Index i = 0; i < n; ++i) y[i] += sigma * rng.normal();
  return Dataset<double>(std::move(X), std::move(y));
}

}  // namespace aenet::test
