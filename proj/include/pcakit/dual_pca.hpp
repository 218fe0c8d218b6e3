#pragma once
// Dual PCA: everything is expressed through the right singular vectors V and
// singular values of the centered training data, so the d x d scatter matrix
// is never formed. Preferable when d >> n.

#include "pcakit/types.hpp"

#include <optional>

namespace pcakit {

struct DualModel {
  Matrix right_vectors;   ///< n x p
  Vector singular;        ///< length p, strictly positive, descending
  Matrix centered_train;  ///< d x n training data minus its mean
  Vector mean;            ///< length d

  Index dims() const { return centered_train.rows(); }
  Index samples() const { return centered_train.cols(); }
  Index components() const { return singular.size(); }

  /// Recovered directions Xc V Sigma^{-1}.
  Matrix directions() const;
};

DualModel fit_dual(const DataMatrix& x, std::optional<Index> p = std::nullopt);

/// Sigma V^T
Embedding project_train(const DualModel& model);

/// Xc V V^T + mean
Matrix reconstruct_train(const DualModel& model);

/// Sigma^{-1} V^T Xc^T (Xt - mean)
Embedding project_oos(const DualModel& model, const DataMatrix& xt);

/// Xc V Sigma^{-2} V^T Xc^T (Xt - mean) + mean
Matrix reconstruct_oos(const DualModel& model, const DataMatrix& xt);

}  // namespace pcakit
