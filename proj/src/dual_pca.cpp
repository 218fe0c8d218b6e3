#include "pcakit/dual_pca.hpp"

#include "pcakit/error.hpp"
#include "pcakit/linalg.hpp"

#include <string>

namespace pcakit {

namespace {

void require_dims(const DualModel& model, const DataMatrix& xt) {
  if (xt.dims() != model.dims()) {
    throw Error(ErrorCode::InvalidDimension, "model expects " + std::to_string(model.dims()) +
                                                 " features, data has " + std::to_string(xt.dims()));
  }
}

}  // namespace

Matrix DualModel::directions() const {
  return centered_train * right_vectors * singular.cwiseInverse().asDiagonal();
}

DualModel fit_dual(const DataMatrix& x, std::optional<Index> p) {
  if (x.samples() < 2) throw Error(ErrorCode::DegenerateInput, "dual PCA needs at least two samples");
  DualModel model;
  auto centered = center_data(x);
  model.mean = std::move(centered.mean);
  model.centered_train = std::move(centered.entries);

  const SvdFactors f = svd(model.centered_train, SvdMode::incomplete);
  const Index k = p.value_or(f.rank());
  if (k < 1 || k > f.rank()) {
    throw Error(ErrorCode::RankExceeded, "requested " + std::to_string(k) +
                                             " components but the effective rank is " +
                                             std::to_string(f.rank()));
  }
  model.right_vectors = f.right.leftCols(k);
  model.singular = f.singular.head(k);
  return model;
}

Embedding project_train(const DualModel& model) {
  return {model.singular.asDiagonal() * model.right_vectors.transpose()};
}

Matrix reconstruct_train(const DualModel& model) {
  Matrix out = model.centered_train * (model.right_vectors * model.right_vectors.transpose());
  return out.colwise() + model.mean;
}

Embedding project_oos(const DualModel& model, const DataMatrix& xt) {
  require_dims(model, xt);
  const Matrix inner = model.centered_train.transpose() * (xt.values().colwise() - model.mean);
  return {model.singular.cwiseInverse().asDiagonal() * (model.right_vectors.transpose() * inner)};
}

Matrix reconstruct_oos(const DualModel& model, const DataMatrix& xt) {
  require_dims(model, xt);
  const Matrix inner = model.centered_train.transpose() * (xt.values().colwise() - model.mean);
  const Matrix coeffs =
      model.singular.array().square().inverse().matrix().asDiagonal() * (model.right_vectors.transpose() * inner);
  Matrix out = model.centered_train * (model.right_vectors * coeffs);
  return out.colwise() + model.mean;
}

}  // namespace pcakit
