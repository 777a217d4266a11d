#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

namespace clpqr {

// Design matrix X (T x m) plus response y; the unit every estimator consumes.
struct Dataset {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<std::string> column_names;

  Eigen::Index rows() const { return X.rows(); }
  Eigen::Index cols() const { return X.cols(); }

  void validate() const {
    if (X.rows() < 1 || X.cols() < 1) throw std::invalid_argument("Dataset: empty design");
    if (y.size() != X.rows()) throw std::invalid_argument("Dataset: X/y row mismatch");
    if (!X.allFinite() || !y.allFinite())
      throw std::invalid_argument("Dataset: non-finite entries");
    if (!column_names.empty() && static_cast<Eigen::Index>(column_names.size()) != X.cols())
      throw std::invalid_argument("Dataset: column_names length mismatch");
  }
};

}  // namespace clpqr
