#include "pcakit/kernels.hpp"

#include "pcakit/error.hpp"
#include "pcakit/linalg.hpp"
#include "pcakit/simd/kernels.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

namespace pcakit {

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::linear: return "linear";
    case KernelFamily::polynomial: return "polynomial";
    case KernelFamily::rbf: return "rbf";
    case KernelFamily::sigmoid: return "sigmoid";
    case KernelFamily::cosine: return "cosine";
    case KernelFamily::delta: return "delta";
  }
  return "linear";
}

KernelFamily kernel_family_from_string(std::string_view name) {
  for (auto family : {KernelFamily::linear, KernelFamily::polynomial, KernelFamily::rbf,
                      KernelFamily::sigmoid, KernelFamily::cosine, KernelFamily::delta}) {
    if (name == to_string(family)) return family;
  }
  throw Error(ErrorCode::UsageError, "unknown kernel '" + std::string(name) + "'");
}

KernelSpec KernelSpec::defaults(KernelFamily family, Index d) {
  const double inv_d = d > 0 ? 1.0 / static_cast<double>(d) : 1.0;
  KernelSpec spec;
  spec.family = family;
  switch (family) {
    case KernelFamily::polynomial:
      spec.c1 = 1.0;
      spec.c2 = 1.0;
      spec.c3 = 3.0;
      break;
    case KernelFamily::rbf:
      spec.gamma = inv_d;
      break;
    case KernelFamily::sigmoid:
      spec.c1 = inv_d;
      spec.c2 = 0.0;
      break;
    default:
      break;
  }
  return spec;
}

void validate(const KernelSpec& spec) {
  if (!std::isfinite(spec.c1) || !std::isfinite(spec.c2) || !std::isfinite(spec.c3) ||
      !std::isfinite(spec.gamma)) {
    throw Error(ErrorCode::DegenerateInput, "kernel parameters must be finite");
  }
  if (spec.family == KernelFamily::rbf && !(spec.gamma > 0.0)) {
    throw Error(ErrorCode::DegenerateInput, "rbf kernel needs gamma > 0");
  }
  if (spec.family == KernelFamily::polynomial && spec.c3 < 1.0) {
    throw Error(ErrorCode::DegenerateInput, "polynomial kernel needs c3 >= 1");
  }
}

namespace {

double evaluate(const KernelSpec& spec, const double* a, const double* b, std::size_t d) {
  const auto& ops = simd::active();
  switch (spec.family) {
    case KernelFamily::linear:
      return ops.dot(a, b, d) + spec.c1;
    case KernelFamily::polynomial: {
      const double value = std::pow(spec.c1 * ops.dot(a, b, d) + spec.c2, spec.c3);
      if (!std::isfinite(value)) {
        throw Error(ErrorCode::DegenerateInput,
                    "polynomial kernel produced a non-finite value (negative base with fractional c3?)");
      }
      return value;
    }
    case KernelFamily::rbf:
      return std::exp(-spec.gamma * ops.squared_distance(a, b, d));
    case KernelFamily::sigmoid:
      return std::tanh(spec.c1 * ops.dot(a, b, d) + spec.c2);
    case KernelFamily::cosine: {
      const double na = ops.dot(a, a, d);
      const double nb = ops.dot(b, b, d);
      if (!(na > 0.0) || !(nb > 0.0)) {
        throw Error(ErrorCode::DegenerateInput, "cosine kernel is undefined for a zero vector");
      }
      return ops.dot(a, b, d) / (std::sqrt(na) * std::sqrt(nb));
    }
    case KernelFamily::delta:
      break;
  }
  throw Error(ErrorCode::WrongKernelKind, "delta kernel applies to category labels, not feature vectors");
}

}  // namespace

double kernel_eval(const KernelSpec& spec, std::span<const double> x1, std::span<const double> x2) {
  if (x1.size() != x2.size()) {
    throw Error(ErrorCode::InvalidDimension, "kernel arguments have lengths " +
                                                 std::to_string(x1.size()) + " and " +
                                                 std::to_string(x2.size()));
  }
  return evaluate(spec, x1.data(), x2.data(), x1.size());
}

KernelMatrix kernel_matrix(const KernelSpec& spec, const DataMatrix& x1, const DataMatrix& x2) {
  if (x1.dims() != x2.dims()) {
    throw Error(ErrorCode::InvalidDimension, "kernel operands have " + std::to_string(x1.dims()) +
                                                 " and " + std::to_string(x2.dims()) + " features");
  }
  if (spec.family == KernelFamily::delta) {
    throw Error(ErrorCode::WrongKernelKind, "delta kernel applies to category labels, not feature vectors");
  }
  validate(spec);
  const auto d = static_cast<std::size_t>(x1.dims());
  const Matrix& a = x1.values();
  const Matrix& b = x2.values();
  KernelMatrix out{Matrix(a.cols(), b.cols()), spec};
  // Column-major storage: every sample is contiguous.
  for (Index j = 0; j < b.cols(); ++j) {
    const double* bj = b.col(j).data();
    for (Index i = 0; i < a.cols(); ++i) out.entries(i, j) = evaluate(spec, a.col(i).data(), bj, d);
  }
  return out;
}

KernelMatrix kernel_matrix(const KernelSpec& spec, const DataMatrix& x) { return kernel_matrix(spec, x, x); }

LabelMatrix one_hot(const CategoryLabels& labels) {
  if (labels.empty()) throw Error(ErrorCode::EmptyInput, "one_hot needs at least one label");
  std::unordered_map<std::string, Index> index;
  LabelMatrix out;
  for (const auto& label : labels) {
    if (index.emplace(label, static_cast<Index>(out.classes.size())).second) out.classes.push_back(label);
  }
  out.entries = Matrix::Zero(static_cast<Index>(out.classes.size()), static_cast<Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) out.entries(index.at(labels[i]), static_cast<Index>(i)) = 1.0;
  return out;
}

KernelMatrix delta_kernel(const CategoryLabels& labels) {
  if (labels.empty()) throw Error(ErrorCode::EmptyInput, "delta kernel needs at least one label");
  const auto n = static_cast<Index>(labels.size());
  KernelMatrix out{Matrix(n, n), KernelSpec{KernelFamily::delta}};
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      out.entries(i, j) = labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)] ? 1.0 : 0.0;
    }
  }
  return out;
}

Matrix linear_label_kernel(const Matrix& y) { return y.transpose() * y; }

Matrix center_train_kernel(const Matrix& k) {
  if (k.rows() != k.cols()) {
    throw Error(ErrorCode::InvalidDimension, "training kernel must be square, got " +
                                                 std::to_string(k.rows()) + "x" + std::to_string(k.cols()));
  }
  return double_center(k);
}

Matrix center_oos_kernel(const Matrix& k, const Matrix& kt) {
  if (k.rows() != k.cols() || kt.rows() != k.rows()) {
    throw Error(ErrorCode::InvalidDimension,
                "train kernel " + std::to_string(k.rows()) + "x" + std::to_string(k.cols()) +
                    " incompatible with train-vs-test kernel " + std::to_string(kt.rows()) + "x" +
                    std::to_string(kt.cols()));
  }
  const Vector train_row_mean = k.rowwise().mean();
  const double train_mean = k.mean();
  const Eigen::RowVectorXd test_col_mean = kt.colwise().mean();
  Matrix out = kt.rowwise() - test_col_mean;
  out.colwise() -= train_row_mean;
  out.array() += train_mean;
  return out;
}

}  // namespace pcakit
