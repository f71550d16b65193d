#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aenet/types.hpp"

namespace aenet {

/// Response vector plus dense design matrix, validated at construction:
/// n >= 1, p >= 1, y.size() == X.rows(), all entries finite.
template <class Scalar>
class Dataset {
 public:
  Dataset(Mat<Scalar> X, Vec<Scalar> y, std::vector<std::string> column_names = {})
      : X_(std::move(X)), y_(std::move(y)), column_names_(std::move(column_names)) {
    if (X_.rows() < 1 || X_.cols() < 1)
      throw std::invalid_argument("Dataset: need n >= 1 and p >= 1");
    if (y_.size() != X_.rows())
      throw std::invalid_argument("Dataset: y length must equal row count of X");
    if (!X_.allFinite() || !y_.allFinite())
      throw std::invalid_argument("Dataset: non-finite entries rejected");
    if (!column_names_.empty() && static_cast<Index>(column_names_.size()) != X_.cols())
      throw std::invalid_argument("Dataset: column_names length must equal p");
  }

  Index n() const { return X_.rows(); }
  Index p() const { return X_.cols(); }

  const Mat<Scalar>& X() const { return X_; }
  const Vec<Scalar>& y() const { return y_; }
  const std::vector<std::string>& column_names() const { return column_names_; }

 private:
  Mat<Scalar> X_;
  Vec<Scalar> y_;
  std::vector<std::string> column_names_;
};

}  // namespace aenet
