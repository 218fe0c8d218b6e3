#include "pcakit/kernel_pca.hpp"

#include "pcakit/error.hpp"
#include "pcakit/linalg.hpp"

#include <limits>
#include <string>

namespace pcakit {

namespace detail {

Index select_positive_spectrum(const Vector& descending, Index dim, std::optional<Index> p, const char* method,
                               double floor) {
  const double scale = descending.size() > 0 ? descending.cwiseAbs().maxCoeff() : 0.0;
  // Same rule as effective_rank, applied to |eigenvalues| of a symmetric operator.
  const double tol = std::max(static_cast<double>(dim) * std::numeric_limits<double>::epsilon() * scale, floor);
  Index positive = 0;
  while (positive < descending.size() && scale > 0.0 && descending(positive) > tol) ++positive;

  const Index wanted = p.value_or(positive);
  if (wanted < 1) {
    throw Error(ErrorCode::RankExceeded, std::string(method) + ": no positive eigenvalues above the rank tolerance");
  }
  if (wanted > positive) {
    if (wanted <= descending.size() && descending(wanted - 1) < -1e-8 * scale) {
      throw Error(ErrorCode::NotPositiveSemidefinite,
                  std::string(method) + ": component " + std::to_string(wanted) + " has eigenvalue " +
                      std::to_string(descending(wanted - 1)));
    }
    throw Error(ErrorCode::RankExceeded, std::string(method) + ": requested " + std::to_string(wanted) +
                                             " components but only " + std::to_string(positive) +
                                             " eigenvalues are positive");
  }
  return wanted;
}

}  // namespace detail

KernelModel fit_kpca(const DataMatrix& x, const KernelSpec& spec, std::optional<Index> p) {
  KernelModel model;
  model.spec = spec;
  model.train_data = x;
  model.train_kernel = kernel_matrix(spec, x).entries;

  const Matrix centered = center_train_kernel(model.train_kernel);
  const EigenPairs all = sym_eig_sorted(centered);
  const Index k = detail::select_positive_spectrum(all.values, centered.rows(), p, "kernel PCA");

  model.right_vectors = all.vectors.leftCols(k);
  model.singular = all.values.head(k).cwiseSqrt();
  const double scale = all.values.cwiseAbs().maxCoeff();
  model.dropped_negative = static_cast<Index>((all.values.array() < -1e-8 * scale).count());
  return model;
}

Embedding project_train(const KernelModel& model) {
  return {model.singular.asDiagonal() * model.right_vectors.transpose()};
}

Embedding project_oos(const KernelModel& model, const DataMatrix& xt) {
  if (xt.dims() != model.train_data.dims()) {
    throw Error(ErrorCode::InvalidDimension, "model expects " + std::to_string(model.train_data.dims()) +
                                                 " features, data has " + std::to_string(xt.dims()));
  }
  const Matrix kt = kernel_matrix(model.spec, model.train_data, xt).entries;
  const Matrix centered = center_oos_kernel(model.train_kernel, kt);
  return {model.singular.cwiseInverse().asDiagonal() * (model.right_vectors.transpose() * centered)};
}

void reconstruct_any(const KernelModel& model, ReconstructionTarget target) {
  const char* what = target == ReconstructionTarget::training ? "training" : "out-of-sample";
  throw Error(ErrorCode::ReconstructionUnsupported,
              std::string("kernel PCA (") + std::string(to_string(model.spec.family)) +
                  " kernel) cannot reconstruct " + what +
                  " data: the feature map is only available through kernel evaluations");
}

}  // namespace pcakit
