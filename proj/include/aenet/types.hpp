#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace aenet {

using Index = Eigen::Index;

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Coefficients below this magnitude are treated as exact zeros when
/// extracting supports.
inline constexpr double kZeroTol = 1e-12;

enum class MethodTag {
  lasso,
  elastic_net,
  adaptive_lasso,
  adaptive_elastic_net,
  ssls,
  ols,
};

inline const char* to_string(MethodTag tag) {
  switch (tag) {
    case MethodTag::lasso: return "lasso";
    case MethodTag::elastic_net: return "elastic_net";
    case MethodTag::adaptive_lasso: return "adaptive_lasso";
    case MethodTag::adaptive_elastic_net: return "adaptive_elastic_net";
    case MethodTag::ssls: return "ssls";
    case MethodTag::ols: return "ols";
  }
  return "unknown";
}

/// Strictly increasing set of column indices in [0, p).
class SupportSet {
 public:
  SupportSet() = default;

  explicit SupportSet(std::vector<Index> indices) : indices_(std::move(indices)) {
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      if (indices_[i] < 0) throw std::invalid_argument("SupportSet: negative index");
      if (i > 0 && indices_[i] <= indices_[i - 1])
        throw std::invalid_argument("SupportSet: indices must be strictly increasing");
    }
  }

  static SupportSet from_unsorted(std::vector<Index> indices) {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    return SupportSet(std::move(indices));
  }

  const std::vector<Index>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }

  bool contains(Index j) const {
    return std::binary_search(indices_.begin(), indices_.end(), j);
  }

  void validate_for(Index p) const {
    if (!indices_.empty() && indices_.back() >= p)
      throw std::invalid_argument("SupportSet: index out of range for p=" + std::to_string(p));
  }

  friend bool operator==(const SupportSet& a, const SupportSet& b) {
    return a.indices_ == b.indices_;
  }

 private:
  std::vector<Index> indices_;
};

/// Indices with |beta_j| > tol, in increasing order.
template <class Scalar>
SupportSet support_of(const Vec<Scalar>& beta, Scalar tol = Scalar(kZeroTol)) {
  std::vector<Index> idx;
  for (Index j = 0; j < beta.size(); ++j) {
    if (std::abs(beta[j]) > tol) idx.push_back(j);
  }
  return SupportSet(std::move(idx));
}

}  // namespace aenet
