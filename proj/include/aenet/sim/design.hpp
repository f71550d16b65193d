#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "aenet/dataset.hpp"
#include "aenet/types.hpp"

namespace aenet::sim {

enum class CovKind { identity, ar1, ic_violation };

const char* to_string(CovKind kind);

/// One simulated regression setting: rows of X are N(0, Sigma) for
/// identity/ar1(rho); the ic_violation design draws p-1 standard normal
/// columns and sets the last one to the fixed combination
///   x_p = 1/6 x_1 + 5/6 x_2 + 1/2 x_3 + 1/6 e
/// whose population irrepresentable-condition value on {1,2} is exactly 1.
/// y = X beta + sigma * eps. Identical (seed, replicate) pairs give
/// bit-identical data regardless of execution order.
struct SimDesign {
  Index n{0};
  Index p{0};
  Vec<double> beta_true;  // padded with zeros up to p
  double sigma{1.0};
  CovKind cov{CovKind::identity};
  double rho{0.0};
  std::uint64_t seed{0};

  void validate() const;
  Vec<double> full_beta() const;
  std::string label() const;
};

std::pair<Dataset<double>, Vec<double>> generate(const SimDesign& design,
                                                 std::uint64_t replicate = 0);

/// Irrepresentable-condition statistic ||C21 C11^{-1} signs||_inf with
/// C = X'X / n partitioned by the support S. Values >= 1 mean the condition
/// fails for (S, signs).
double ic_check(const Mat<double>& X, const SupportSet& S, const Vec<double>& signs);

}  // namespace aenet::sim
