#include "pcakit/spca.hpp"

#include "pcakit/error.hpp"
#include "pcakit/kernel_pca.hpp"
#include "pcakit/linalg.hpp"
#include "pcakit/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pcakit {

namespace {

void require_label_kernel(const DataMatrix& x, const Matrix& ky) {
  if (ky.rows() != x.samples() || ky.cols() != x.samples()) {
    throw Error(ErrorCode::InvalidDimension, "label kernel is " + std::to_string(ky.rows()) + "x" +
                                                 std::to_string(ky.cols()) + " but the data has " +
                                                 std::to_string(x.samples()) + " samples");
  }
}

Index checked_components(std::optional<Index> p, Index rank, const char* method) {
  const Index wanted = p.value_or(rank);
  if (wanted < 1 || wanted > rank) {
    throw Error(ErrorCode::RankExceeded, std::string(method) + ": requested " + std::to_string(wanted) +
                                             " components but the effective rank is " + std::to_string(rank));
  }
  return wanted;
}

}  // namespace

FeatureScores score_features(const DataMatrix& x, const Vector& y) {
  if (y.size() != x.samples()) {
    throw Error(ErrorCode::InvalidDimension, "label vector has length " + std::to_string(y.size()) +
                                                 ", data has " + std::to_string(x.samples()) + " samples");
  }
  // Transposed copy so every feature row is contiguous.
  const Matrix features = x.values().transpose();
  const auto n = static_cast<std::size_t>(x.samples());
  const auto& ops = simd::active();

  FeatureScores out;
  out.scores.resize(x.dims());
  for (Index j = 0; j < x.dims(); ++j) {
    const double* row = features.col(j).data();
    const double norm_sq = ops.dot(row, row, n);
    out.scores(j) = norm_sq > 0.0 ? ops.dot(row, y.data(), n) / std::sqrt(norm_sq) : 0.0;
  }
  out.order.resize(static_cast<std::size_t>(x.dims()));
  std::iota(out.order.begin(), out.order.end(), Index{0});
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](Index a, Index b) { return out.scores(a) > out.scores(b); });
  return out;
}

DataMatrix take_features(const DataMatrix& x, const std::vector<Index>& indices) {
  Matrix rows(static_cast<Index>(indices.size()), x.samples());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] < 0 || indices[r] >= x.dims()) {
      throw Error(ErrorCode::InvalidDimension, "feature index " + std::to_string(indices[r]) +
                                                   " out of range for " + std::to_string(x.dims()) + " features");
    }
    rows.row(static_cast<Index>(r)) = x.values().row(indices[r]);
  }
  return DataMatrix(std::move(rows));
}

FeatureSelection select_features(const DataMatrix& x, const FeatureScores& scores, Index q) {
  if (q < 1 || q > x.dims()) {
    throw Error(ErrorCode::InvalidDimension, "q = " + std::to_string(q) + " outside [1, " +
                                                 std::to_string(x.dims()) + "]");
  }
  if (static_cast<Index>(scores.order.size()) != x.dims()) {
    throw Error(ErrorCode::InvalidDimension, "scores were computed for a different feature count");
  }
  std::vector<Index> kept(scores.order.begin(), scores.order.begin() + q);
  std::sort(kept.begin(), kept.end());
  DataMatrix data = take_features(x, kept);
  return {std::move(data), std::move(kept)};
}

ScoringSpcaModel fit_spca_scoring(const DataMatrix& x, const Vector& y, Index q, std::optional<Index> p,
                                  Centering centering) {
  const FeatureScores scores = score_features(x, y);
  FeatureSelection selection = select_features(x, scores, q);
  ScoringSpcaModel model;
  model.pca = fit_pca_eig(selection.data, p, centering);
  model.selected = std::move(selection.indices);
  model.scores = scores.scores;
  return model;
}

Embedding project(const ScoringSpcaModel& model, const DataMatrix& x) {
  if (x.dims() != model.scores.size()) {
    throw Error(ErrorCode::InvalidDimension, "model expects " + std::to_string(model.scores.size()) +
                                                 " features, data has " + std::to_string(x.dims()));
  }
  return project(model.pca, take_features(x, model.selected));
}

double hsic(const Matrix& kx, const Matrix& ky) {
  if (kx.rows() != kx.cols() || ky.rows() != ky.cols() || kx.rows() != ky.rows()) {
    throw Error(ErrorCode::InvalidDimension, "HSIC needs two square kernels of the same size");
  }
  const Index n = kx.rows();
  if (n < 2) throw Error(ErrorCode::DegenerateInput, "HSIC needs at least two samples");
  // tr(Kx H Ky H) = sum of the elementwise product of Kx^T and H Ky H.
  const Matrix centered_ky = double_center(ky);
  const double trace = (kx.transpose().array() * centered_ky.array()).sum();
  const double scale = static_cast<double>(n - 1);
  return trace / (scale * scale);
}

LinearSubspaceModel fit_spca(const DataMatrix& x, const Matrix& ky, std::optional<Index> p, Centering centering) {
  require_label_kernel(x, ky);
  const Matrix xh = right_center(x.values());
  Matrix target = xh * double_center(ky) * xh.transpose();
  target = (0.5 * (target + target.transpose())).eval();
  const EigenPairs all = sym_eig_sorted(target);
  const double floor = 1e-10 * xh.squaredNorm() * ky.norm();
  const Index k = detail::select_positive_spectrum(all.values, target.rows(), p, "SPCA", floor);

  LinearSubspaceModel model;
  model.directions = all.vectors.leftCols(k);
  model.spectrum = all.values.head(k);
  model.centered = centering == Centering::mean;
  model.mean = model.centered ? Vector(x.values().rowwise().mean()) : Vector::Zero(x.dims());
  return model;
}

Embedding spca_project(const LinearSubspaceModel& model, const DataMatrix& x) { return project(model, x); }

Matrix spca_reconstruct(const LinearSubspaceModel& model, const DataMatrix& x) {
  return reconstruct(model, project(model, x));
}

Matrix decompose_label_kernel(const Matrix& ky) {
  if (ky.rows() != ky.cols()) {
    throw Error(ErrorCode::InvalidDimension, "label kernel must be square");
  }
  const EigenPairs eig = sym_eig_sorted(ky);
  const double scale = eig.values.cwiseAbs().maxCoeff();
  Vector root(eig.values.size());
  for (Index i = 0; i < eig.values.size(); ++i) {
    const double v = eig.values(i);
    if (v < -1e-8 * scale) {
      throw Error(ErrorCode::NotPositiveSemidefinite,
                  "label kernel eigenvalue " + std::to_string(v) + " is below -1e-8 * " + std::to_string(scale));
    }
    root(i) = v > 0.0 ? std::sqrt(v) : 0.0;
  }
  return eig.vectors * root.asDiagonal();
}

DualSpcaModel fit_dual_spca(const DataMatrix& x, const Matrix& ky, std::optional<Index> p, Centering centering) {
  require_label_kernel(x, ky);
  DualSpcaModel model;
  model.delta = decompose_label_kernel(ky);
  model.train_data = x;
  model.centered = centering == Centering::mean;
  model.mean = model.centered ? Vector(x.values().rowwise().mean()) : Vector::Zero(x.dims());

  const Matrix psi = right_center(x.values()) * model.delta;
  const SvdFactors f = svd(psi, SvdMode::incomplete);
  const Index k = checked_components(p, f.rank(), "dual SPCA");
  model.right_vectors = f.right.leftCols(k);
  model.singular = f.singular.head(k);
  return model;
}

namespace {

// V^T Delta^T H X^T X_arg, shared by projection and reconstruction.
Matrix dual_spca_coefficients(const DualSpcaModel& model, const DataMatrix& x) {
  if (x.dims() != model.train_data.dims()) {
    throw Error(ErrorCode::InvalidDimension, "model expects " + std::to_string(model.train_data.dims()) +
                                                 " features, data has " + std::to_string(x.dims()));
  }
  const Matrix xh = right_center(model.train_data.values());
  const Matrix arg = model.centered ? Matrix(x.values().colwise() - model.mean) : x.values();
  const Matrix inner = xh.transpose() * arg;
  return model.right_vectors.transpose() * (model.delta.transpose() * inner);
}

}  // namespace

Embedding dual_spca_project(const DualSpcaModel& model, const DataMatrix& x) {
  return {model.singular.cwiseInverse().asDiagonal() * dual_spca_coefficients(model, x)};
}

Matrix dual_spca_reconstruct(const DualSpcaModel& model, const DataMatrix& x) {
  const Matrix coeffs =
      model.singular.array().square().inverse().matrix().asDiagonal() * dual_spca_coefficients(model, x);
  const Matrix psi = right_center(model.train_data.values()) * model.delta;
  Matrix out = psi * (model.right_vectors * coeffs);
  if (model.centered) out.colwise() += model.mean;
  return out;
}

}  // namespace pcakit
