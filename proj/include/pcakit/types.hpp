#pragma once

#include <Eigen/Core>

#include <string>

namespace pcakit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// d x n real matrix holding one sample per column.
/// Construction rejects empty shapes and non-finite entries.
class DataMatrix {
 public:
  DataMatrix() = default;
  explicit DataMatrix(Matrix values);

  Index dims() const { return values_.rows(); }
  Index samples() const { return values_.cols(); }
  const Matrix& values() const { return values_; }
  auto sample(Index i) const { return values_.col(i); }

 private:
  Matrix values_;
};

/// Result of mean removal: entries = X - mean * 1^T.
struct CenteredData {
  Matrix entries;
  Vector mean;
};

/// p x n matrix of embedded samples (one column per sample).
struct Embedding {
  Matrix entries;

  Index components() const { return entries.rows(); }
  Index samples() const { return entries.cols(); }
};

}  // namespace pcakit
