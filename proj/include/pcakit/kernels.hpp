#pragma once

#include "pcakit/types.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pcakit {

enum class KernelFamily { linear, polynomial, rbf, sigmoid, cosine, delta };

std::string_view to_string(KernelFamily family);
KernelFamily kernel_family_from_string(std::string_view name);

/// Kernel family plus its scalar parameters.
///
///   linear      x1.x2 + c1
///   polynomial  (c1 x1.x2 + c2)^c3
///   rbf         exp(-gamma |x1 - x2|^2), gamma = 1 / (2 sigma^2)
///   sigmoid     tanh(c1 x1.x2 + c2)
///   cosine      x1.x2 / (|x1| |x2|)
///   delta       1 if labels match else 0 (labels only)
struct KernelSpec {
  KernelFamily family = KernelFamily::linear;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 1.0;
  double gamma = 1.0;

  /// Default parameters for data of dimension d.
  static KernelSpec defaults(KernelFamily family, Index d);

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

/// Throws DegenerateInput for out-of-range parameters.
void validate(const KernelSpec& spec);

struct KernelMatrix {
  Matrix entries;
  KernelSpec spec;
};

/// Category labels paired with a data set, one entry per sample.
using CategoryLabels = std::vector<std::string>;

/// l x n label matrix, one column per sample.
struct LabelMatrix {
  Matrix entries;
  std::vector<std::string> classes;  ///< row order, for one-hot matrices
};

double kernel_eval(const KernelSpec& spec, std::span<const double> x1, std::span<const double> x2);

/// entries(i, j) = k(X1 column i, X2 column j).
KernelMatrix kernel_matrix(const KernelSpec& spec, const DataMatrix& x1, const DataMatrix& x2);
KernelMatrix kernel_matrix(const KernelSpec& spec, const DataMatrix& x);

KernelMatrix delta_kernel(const CategoryLabels& labels);

/// One-hot encoding; class rows in first-appearance order.
LabelMatrix one_hot(const CategoryLabels& labels);

/// Y^T Y for an l x n label matrix.
Matrix linear_label_kernel(const Matrix& y);

/// H K H for a square training kernel.
Matrix center_train_kernel(const Matrix& k);

/// Centers a train-vs-test kernel (n x n_t) with the training statistics of K.
Matrix center_oos_kernel(const Matrix& k, const Matrix& kt);

}  // namespace pcakit
