#pragma once
// Kernel PCA through the eigendecomposition of the double-centered Gram
// matrix. The feature map is never formed, so neither training nor held-out
// data can be reconstructed; reconstruct_any() reports exactly that.

#include "pcakit/kernels.hpp"
#include "pcakit/types.hpp"

#include <optional>

namespace pcakit {

struct KernelModel {
  Matrix right_vectors;  ///< n x p eigenvectors of the centered kernel
  Vector singular;       ///< sqrt of the matching eigenvalues
  KernelSpec spec;
  DataMatrix train_data;
  Matrix train_kernel;   ///< uncentered n x n training kernel
  Index dropped_negative = 0;  ///< negative eigenvalues beyond the cut (indefinite kernels)

  Index components() const { return singular.size(); }
  Index samples() const { return train_kernel.rows(); }
};

enum class ReconstructionTarget { training, out_of_sample };

/// Throws RankExceeded when p exceeds the count of positive eigenvalues above
/// the rank tolerance, or NotPositiveSemidefinite when the p-th eigenvalue is
/// below -1e-8 * max|eigenvalue|.
KernelModel fit_kpca(const DataMatrix& x, const KernelSpec& spec, std::optional<Index> p = std::nullopt);

/// Sigma V^T
Embedding project_train(const KernelModel& model);

/// Sigma^{-1} V^T Kt_centered
Embedding project_oos(const KernelModel& model, const DataMatrix& xt);

/// Always throws ReconstructionUnsupported.
[[noreturn]] void reconstruct_any(const KernelModel& model, ReconstructionTarget target);

namespace detail {

/// Shared eigenvalue cut for Gram-type operators: returns the number of
/// leading eigenvalues usable as squared singular values, validating p.
/// Eigenvalues at or below `floor` count as zero whatever the rank rule says.
Index select_positive_spectrum(const Vector& descending, Index dim, std::optional<Index> p, const char* method,
                               double floor = 0.0);

}  // namespace detail

}  // namespace pcakit
