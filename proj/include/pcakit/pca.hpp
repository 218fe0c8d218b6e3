#pragma once
// Direct PCA: principal directions from the scatter matrix (or the SVD of the
// centered data), projection and reconstruction for training and held-out
// samples, and spectrum utilities for choosing the component count.

#include "pcakit/types.hpp"

#include <optional>
#include <vector>

namespace pcakit {

/// Whether the training mean is removed before fitting / projecting.
/// `none` is the latent-semantic-indexing style use on raw data.
enum class Centering { mean, none };

struct LinearSubspaceModel {
  Matrix directions;  ///< d x p, orthonormal columns
  Vector mean;        ///< length d; zero when centered == false
  Vector spectrum;    ///< length p, non-increasing
  bool centered = true;

  Index dims() const { return directions.rows(); }
  Index components() const { return directions.cols(); }
};

struct SpectrumReport {
  Vector eigenvalues;
  Vector ratios;
  Vector cumulative;
};

/// Unnormalized scatter X H X^T (or X X^T with Centering::none).
/// Throws DegenerateInput for fewer than two samples when centering.
Matrix scatter_matrix(const DataMatrix& x, Centering centering = Centering::mean);

/// PCA from the eigendecomposition of the scatter matrix. p defaults to the
/// effective rank; a larger p throws RankExceeded.
LinearSubspaceModel fit_pca_eig(const DataMatrix& x, std::optional<Index> p = std::nullopt,
                                Centering centering = Centering::mean);

/// PCA from the left singular vectors of the centered data; spectrum = sigma^2.
LinearSubspaceModel fit_pca_svd(const DataMatrix& x, std::optional<Index> p = std::nullopt,
                                Centering centering = Centering::mean);

/// U^T (X - mean). Works for training and held-out samples alike.
Embedding project(const LinearSubspaceModel& model, const DataMatrix& x);

/// U E + mean.
Matrix reconstruct(const LinearSubspaceModel& model, const Embedding& embedding);

/// || Xc - U U^T Xc ||_F^2 with Xc the data centered by the model mean.
double reconstruction_error(const LinearSubspaceModel& model, const DataMatrix& x);

SpectrumReport spectrum_report(const Vector& eigenvalues);
SpectrumReport spectrum_report(const LinearSubspaceModel& model);

/// Ordered product U1 U2 ... Um of chainable linear layers.
Matrix compose_linear_layers(const std::vector<Matrix>& layers);

/// Pushes centered data through the stacked encoder U_m^T ... U_1^T and back
/// through the decoder U_1 ... U_m, then adds the mean.
Matrix stacked_reconstruction(const std::vector<Matrix>& layers, const Matrix& centered, const Vector& mean);

}  // namespace pcakit
