#pragma once
// Supervised PCA, both flavours:
//  * feature scoring: rank features by their normalized inner product with a
//    single real label vector, keep the best q, then run ordinary PCA;
//  * HSIC maximization: directions are the leading eigenvectors of
//    X H Ky H X^T, with a dual form through Ky = Delta Delta^T.

#include "pcakit/pca.hpp"
#include "pcakit/types.hpp"

#include <optional>
#include <vector>

namespace pcakit {

struct FeatureScores {
  Vector scores;              ///< one per feature
  std::vector<Index> order;   ///< feature indices, descending score (stable)
};

struct FeatureSelection {
  DataMatrix data;             ///< q x n, retained rows in ascending original index order
  std::vector<Index> indices;  ///< original index of each retained row
};

/// s_j = x^j . y / |x^j|; all-zero feature rows score 0.
FeatureScores score_features(const DataMatrix& x, const Vector& y);

/// Keeps the q best-scoring features.
FeatureSelection select_features(const DataMatrix& x, const FeatureScores& scores, Index q);

/// Row subset of X given by a stored index list.
DataMatrix take_features(const DataMatrix& x, const std::vector<Index>& indices);

/// Scoring SPCA: PCA on the q best-scoring features.
struct ScoringSpcaModel {
  std::vector<Index> selected;  ///< retained feature indices, ascending
  Vector scores;                ///< scores of all d input features
  LinearSubspaceModel pca;      ///< fitted on the retained rows
};

ScoringSpcaModel fit_spca_scoring(const DataMatrix& x, const Vector& y, Index q,
                                  std::optional<Index> p = std::nullopt, Centering centering = Centering::mean);

/// Selects the stored features of full-width data and projects them.
Embedding project(const ScoringSpcaModel& model, const DataMatrix& x);

/// (1/(n-1)^2) tr(Kx H Ky H)
double hsic(const Matrix& kx, const Matrix& ky);

/// Direct SPCA. With Centering::none (default) the model projects raw X, as
/// in the HSIC derivation; Centering::mean stores the training mean so the
/// embedding of the training set has zero mean. The directions are the same
/// either way because X H = (X - mean) H.
LinearSubspaceModel fit_spca(const DataMatrix& x, const Matrix& ky, std::optional<Index> p = std::nullopt,
                             Centering centering = Centering::none);

Embedding spca_project(const LinearSubspaceModel& model, const DataMatrix& x);
Matrix spca_reconstruct(const LinearSubspaceModel& model, const DataMatrix& x);

/// Delta = Q Omega^{1/2} with Ky = Q Omega Q^T. Eigenvalues in
/// [-1e-8 max, 0) are clamped to zero; anything more negative throws
/// NotPositiveSemidefinite.
Matrix decompose_label_kernel(const Matrix& ky);

struct DualSpcaModel {
  Matrix delta;          ///< n x n
  Matrix right_vectors;  ///< n x p, right singular vectors of Psi = X H Delta
  Vector singular;       ///< p singular values of Psi
  DataMatrix train_data;
  Vector mean;           ///< subtracted from every argument when centered
  bool centered = false;

  Index components() const { return singular.size(); }
};

DualSpcaModel fit_dual_spca(const DataMatrix& x, const Matrix& ky, std::optional<Index> p = std::nullopt,
                            Centering centering = Centering::none);

/// Sigma^{-1} V^T Delta^T H X^T X_arg
Embedding dual_spca_project(const DualSpcaModel& model, const DataMatrix& x);

/// X H Delta V Sigma^{-2} V^T Delta^T H X^T X_arg
Matrix dual_spca_reconstruct(const DualSpcaModel& model, const DataMatrix& x);

}  // namespace pcakit
