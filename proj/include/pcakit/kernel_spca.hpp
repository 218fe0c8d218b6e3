#pragma once
// Kernel supervised PCA by two routes.
//
// Direct: directions U = Phi(X) Theta solve the generalized eigenproblem
//   Kx H Ky H Kx Theta = Kx Theta Lambda,  Theta^T Kx Theta = I.
// Dual: with Ky = Delta Delta^T, (Delta^T H Kx H Delta) V = V Sigma^2.
//
// Neither route can reconstruct data because Phi is never formed.

#include "pcakit/kernel_pca.hpp"
#include "pcakit/kernels.hpp"
#include "pcakit/pca.hpp"
#include "pcakit/types.hpp"

#include <optional>

namespace pcakit {

struct KernelSpcaDirectModel {
  Matrix theta;        ///< n x p
  Vector eigenvalues;  ///< generalized eigenvalues, descending
  KernelSpec spec;
  DataMatrix train_data;
  Matrix train_kernel;  ///< Kx of the (optionally mean-shifted) training data
  Vector mean;          ///< subtracted from samples before kernel evaluation
  bool centered = false;
  double ridge = 0.0;   ///< epsilon added to Kx before whitening

  Index components() const { return theta.cols(); }
};

struct KernelSpcaDualModel {
  Matrix delta;          ///< n x n
  Matrix right_vectors;  ///< n x p
  Vector singular;       ///< p
  KernelSpec spec;
  DataMatrix train_data;
  Matrix train_kernel;
  Vector mean;
  bool centered = false;

  Index components() const { return singular.size(); }
};

/// Whitened generalized eigensolve with Kx + eps I, eps = 1e-10 tr(Kx) / n.
KernelSpcaDirectModel fit_kspca_direct(const DataMatrix& x, const KernelSpec& spec, const Matrix& ky,
                                       std::optional<Index> p = std::nullopt,
                                       Centering centering = Centering::none);

/// Eigenvectors of the non-symmetric H Ky H Kx, rescaled to unit
/// Theta^T Kx Theta diagonal. Cross-check for the whitened route; throws
/// ComplexEigenvalues when a selected eigenvalue is not real.
KernelSpcaDirectModel fit_kspca_direct_naive(const DataMatrix& x, const KernelSpec& spec, const Matrix& ky,
                                             std::optional<Index> p = std::nullopt,
                                             Centering centering = Centering::none);

/// Theta^T Kx on the training set.
Embedding kspca_direct_project_train(const KernelSpcaDirectModel& model);

/// Theta^T Kt with the uncentered train-vs-test kernel.
Embedding kspca_direct_project(const KernelSpcaDirectModel& model, const DataMatrix& x);

KernelSpcaDualModel fit_kspca_dual(const DataMatrix& x, const KernelSpec& spec, const Matrix& ky,
                                   std::optional<Index> p = std::nullopt, Centering centering = Centering::none);

/// Sigma^{-1} V^T Delta^T H Kx on the training set.
Embedding kspca_dual_project_train(const KernelSpcaDualModel& model);

/// Sigma^{-1} V^T Delta^T H Kt.
Embedding kspca_dual_project(const KernelSpcaDualModel& model, const DataMatrix& x);

[[noreturn]] void kspca_reconstruct_any(const KernelSpcaDirectModel& model, ReconstructionTarget target);
[[noreturn]] void kspca_reconstruct_any(const KernelSpcaDualModel& model, ReconstructionTarget target);

}  // namespace pcakit
