#include "pcakit/pca.hpp"

#include "pcakit/error.hpp"
#include "pcakit/linalg.hpp"

#include <string>

namespace pcakit {

namespace {

Matrix prepared_data(const DataMatrix& x, Centering centering, Vector& mean) {
  if (centering == Centering::mean) {
    auto c = center_data(x);
    mean = std::move(c.mean);
    return std::move(c.entries);
  }
  mean = Vector::Zero(x.dims());
  return x.values();
}

Index resolve_components(std::optional<Index> p, Index rank) {
  const Index wanted = p.value_or(rank);
  if (wanted < 1 || wanted > rank) {
    throw Error(ErrorCode::RankExceeded, "requested " + std::to_string(wanted) +
                                             " components but the effective rank is " +
                                             std::to_string(rank));
  }
  return wanted;
}

void require_dims(const LinearSubspaceModel& model, Index d) {
  if (model.dims() != d) {
    throw Error(ErrorCode::InvalidDimension, "model expects " + std::to_string(model.dims()) +
                                                 " features, data has " + std::to_string(d));
  }
}

}  // namespace

Matrix scatter_matrix(const DataMatrix& x, Centering centering) {
  if (centering == Centering::mean && x.samples() < 2) {
    throw Error(ErrorCode::DegenerateInput, "scatter matrix needs at least two samples");
  }
  Vector mean;
  const Matrix data = prepared_data(x, centering, mean);
  Matrix s = Matrix::Zero(x.dims(), x.dims());
  s.selfadjointView<Eigen::Lower>().rankUpdate(data);
  return s.selfadjointView<Eigen::Lower>();
}

LinearSubspaceModel fit_pca_eig(const DataMatrix& x, std::optional<Index> p, Centering centering) {
  const Matrix s = scatter_matrix(x, centering);
  const EigenPairs all = sym_eig_sorted(s);
  // S is PSD, so its singular values are |eigenvalues|.
  const Index rank = effective_rank(all.values.cwiseAbs(), s.rows(), s.cols());
  const Index k = resolve_components(p, rank);

  LinearSubspaceModel model;
  model.directions = all.vectors.leftCols(k);
  model.spectrum = all.values.head(k);
  model.centered = centering == Centering::mean;
  model.mean = model.centered ? Vector(x.values().rowwise().mean()) : Vector::Zero(x.dims());
  return model;
}

LinearSubspaceModel fit_pca_svd(const DataMatrix& x, std::optional<Index> p, Centering centering) {
  if (centering == Centering::mean && x.samples() < 2) {
    throw Error(ErrorCode::DegenerateInput, "PCA needs at least two samples");
  }
  LinearSubspaceModel model;
  const Matrix data = prepared_data(x, centering, model.mean);
  const SvdFactors f = svd(data, SvdMode::incomplete);
  const Index k = resolve_components(p, f.rank());
  model.directions = f.left.leftCols(k);
  model.spectrum = f.singular.head(k).array().square();
  model.centered = centering == Centering::mean;
  return model;
}

Embedding project(const LinearSubspaceModel& model, const DataMatrix& x) {
  require_dims(model, x.dims());
  if (model.centered) return {model.directions.transpose() * (x.values().colwise() - model.mean)};
  return {model.directions.transpose() * x.values()};
}

Matrix reconstruct(const LinearSubspaceModel& model, const Embedding& embedding) {
  if (embedding.components() != model.components()) {
    throw Error(ErrorCode::InvalidDimension, "embedding has " + std::to_string(embedding.components()) +
                                                 " components, model has " +
                                                 std::to_string(model.components()));
  }
  Matrix out = model.directions * embedding.entries;
  if (model.centered) out.colwise() += model.mean;
  return out;
}

double reconstruction_error(const LinearSubspaceModel& model, const DataMatrix& x) {
  require_dims(model, x.dims());
  const Matrix centered = model.centered ? Matrix(x.values().colwise() - model.mean) : x.values();
  const Matrix residual = centered - model.directions * (model.directions.transpose() * centered);
  return residual.squaredNorm();
}

SpectrumReport spectrum_report(const Vector& eigenvalues) {
  if (eigenvalues.size() == 0) throw Error(ErrorCode::EmptyInput, "spectrum is empty");
  const double total = eigenvalues.sum();
  if (!(total != 0.0) || eigenvalues.cwiseAbs().maxCoeff() == 0.0) {
    throw Error(ErrorCode::DegenerateInput, "spectrum sums to zero");
  }
  SpectrumReport report;
  report.eigenvalues = eigenvalues;
  report.ratios = eigenvalues / total;
  report.cumulative.resize(eigenvalues.size());
  double running = 0.0;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    running += report.ratios(i);
    report.cumulative(i) = running;
  }
  return report;
}

SpectrumReport spectrum_report(const LinearSubspaceModel& model) { return spectrum_report(model.spectrum); }

Matrix compose_linear_layers(const std::vector<Matrix>& layers) {
  if (layers.empty()) throw Error(ErrorCode::InvalidDimension, "no layers to compose");
  Matrix product = layers.front();
  for (std::size_t i = 1; i < layers.size(); ++i) {
    if (product.cols() != layers[i].rows()) {
      throw Error(ErrorCode::InvalidDimension, "layer " + std::to_string(i) + " has " +
                                                   std::to_string(layers[i].rows()) +
                                                   " rows, expected " + std::to_string(product.cols()));
    }
    product = product * layers[i];
  }
  return product;
}

Matrix stacked_reconstruction(const std::vector<Matrix>& layers, const Matrix& centered, const Vector& mean) {
  compose_linear_layers(layers);  // shape check
  if (layers.front().rows() != centered.rows() || mean.size() != centered.rows()) {
    throw Error(ErrorCode::InvalidDimension, "layers do not match the data dimension");
  }
  Matrix code = centered;
  for (const auto& layer : layers) code = layer.transpose() * code;
  for (auto it = layers.rbegin(); it != layers.rend(); ++it) code = (*it) * code;
  return code.colwise() + mean;
}

}  // namespace pcakit
