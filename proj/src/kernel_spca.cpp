#include "pcakit/kernel_spca.hpp"

#include "pcakit/error.hpp"
#include "pcakit/linalg.hpp"
#include "pcakit/spca.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace pcakit {

namespace {

struct PreparedKernel {
  DataMatrix shifted;
  Matrix kernel;
  Vector mean;
};

PreparedKernel prepare(const DataMatrix& x, const KernelSpec& spec, const Matrix& ky, Centering centering) {
  if (ky.rows() != x.samples() || ky.cols() != x.samples()) {
    throw Error(ErrorCode::InvalidDimension, "label kernel is " + std::to_string(ky.rows()) + "x" +
                                                 std::to_string(ky.cols()) + " but the data has " +
                                                 std::to_string(x.samples()) + " samples");
  }
  const double skew = asymmetry(ky);
  if (skew > 1e-9) throw Error(ErrorCode::NotSymmetric, "label kernel is not symmetric");
  PreparedKernel out;
  if (centering == Centering::mean) {
    auto c = center_data(x);
    out.mean = std::move(c.mean);
    out.shifted = DataMatrix(std::move(c.entries));
  } else {
    out.mean = Vector::Zero(x.dims());
    out.shifted = x;
  }
  out.kernel = kernel_matrix(spec, out.shifted).entries;
  return out;
}

// Tolerance for calling a generalized eigenvalue zero. The operator is bounded
// by |Kx| |Ky|, so the cut is relative to that product rather than to the
// largest computed eigenvalue, which may itself be rounding noise.
double generalized_tolerance(const Matrix& kx, const Matrix& ky) { return 1e-10 * kx.norm() * ky.norm(); }

// Rounding in the whitened operator grows with the condition number of the
// factored matrix; eigenvalues below that noise level are not resolved.
double whitening_noise(const Matrix& regularized, double top) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(regularized, Eigen::EigenvaluesOnly);
  const double low = solver.eigenvalues().minCoeff();
  const double high = solver.eigenvalues().maxCoeff();
  const double cond = low > 0.0 ? high / low : std::numeric_limits<double>::infinity();
  return static_cast<double>(regularized.rows()) * std::numeric_limits<double>::epsilon() * std::abs(top) * cond;
}

Index count_above(const Vector& descending, double tol) {
  Index k = 0;
  while (k < descending.size() && descending(k) > tol) ++k;
  return k;
}

Index checked_components(std::optional<Index> p, Index available, const char* method) {
  const Index wanted = p.value_or(available);
  if (wanted < 1 || wanted > available) {
    throw Error(ErrorCode::RankExceeded, std::string(method) + ": requested " + std::to_string(wanted) +
                                             " components but only " + std::to_string(available) +
                                             " generalized eigenvalues are positive");
  }
  return wanted;
}

Matrix shifted_argument(const Vector& mean, bool centered, const DataMatrix& x, const DataMatrix& train) {
  if (x.dims() != train.dims()) {
    throw Error(ErrorCode::InvalidDimension, "model expects " + std::to_string(train.dims()) +
                                                 " features, data has " + std::to_string(x.dims()));
  }
  return centered ? Matrix(x.values().colwise() - mean) : x.values();
}

}  // namespace

KernelSpcaDirectModel fit_kspca_direct(const DataMatrix& x, const KernelSpec& spec, const Matrix& ky,
                                       std::optional<Index> p, Centering centering) {
  auto prepared = prepare(x, spec, ky, centering);
  const Matrix& kx = prepared.kernel;
  const Index n = kx.rows();
  const Matrix centered_ky = double_center(ky);

  Matrix lhs = kx * centered_ky * kx;
  lhs = (0.5 * (lhs + lhs.transpose())).eval();

  const double ridge = 1e-10 * kx.trace() / static_cast<double>(n);
  Matrix rhs = kx;
  rhs.diagonal().array() += ridge;
  Eigen::LLT<Matrix> chol(rhs);
  if (chol.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveSemidefinite,
                "kernel SPCA: Kx + eps I is not positive definite (indefinite kernel?)");
  }
  // L^{-1} lhs L^{-T}
  Matrix whitened = chol.matrixL().solve(lhs);
  whitened = chol.matrixL().solve(whitened.transpose().eval()).transpose();
  whitened = (0.5 * (whitened + whitened.transpose())).eval();

  const EigenPairs eig = sym_eig_sorted(whitened);
  const double tol = std::max(generalized_tolerance(kx, ky), whitening_noise(rhs, eig.values(0)));
  const Index available = count_above(eig.values, tol);
  const Index k = checked_components(p, available, "kernel SPCA (direct)");

  KernelSpcaDirectModel model;
  model.theta = chol.matrixU().solve(eig.vectors.leftCols(k));
  model.theta = canonical_sign(std::move(model.theta));
  model.eigenvalues = eig.values.head(k);
  model.spec = spec;
  model.train_data = x;
  model.train_kernel = kx;
  model.mean = std::move(prepared.mean);
  model.centered = centering == Centering::mean;
  model.ridge = ridge;
  return model;
}

KernelSpcaDirectModel fit_kspca_direct_naive(const DataMatrix& x, const KernelSpec& spec, const Matrix& ky,
                                             std::optional<Index> p, Centering centering) {
  auto prepared = prepare(x, spec, ky, centering);
  const Matrix& kx = prepared.kernel;
  const Matrix centered_ky = double_center(ky);
  const Matrix op = centered_ky * kx;

  Eigen::EigenSolver<Matrix> solver(op, true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ComplexEigenvalues, "kernel SPCA (naive): eigensolver did not converge");
  }
  const auto& values = solver.eigenvalues();
  std::vector<Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return values(a).real() > values(b).real(); });

  const double tol = generalized_tolerance(kx, ky);
  Index available = 0;
  while (available < values.size() && values(order[static_cast<std::size_t>(available)]).real() > tol) ++available;
  const Index k = checked_components(p, available, "kernel SPCA (naive)");

  const double scale = std::abs(values(order.front()));
  KernelSpcaDirectModel model;
  model.theta.resize(kx.rows(), k);
  model.eigenvalues.resize(k);
  for (Index j = 0; j < k; ++j) {
    const Index idx = order[static_cast<std::size_t>(j)];
    const auto value = values(idx);
    const Eigen::VectorXcd vec = solver.eigenvectors().col(idx);
    if (std::abs(value.imag()) > 1e-8 * scale || vec.imag().norm() > 1e-8 * vec.norm()) {
      throw Error(ErrorCode::ComplexEigenvalues, "kernel SPCA (naive): eigenvalue " + std::to_string(j + 1) +
                                                     " has imaginary part " + std::to_string(value.imag()));
    }
    Vector theta = vec.real();
    const double norm_sq = theta.dot(kx * theta);
    if (!(norm_sq > 0.0)) {
      throw Error(ErrorCode::DegenerateInput, "kernel SPCA (naive): eigenvector has zero Kx-norm");
    }
    model.theta.col(j) = theta / std::sqrt(norm_sq);
    model.eigenvalues(j) = value.real();
  }
  model.theta = canonical_sign(std::move(model.theta));
  model.spec = spec;
  model.train_data = x;
  model.train_kernel = kx;
  model.mean = std::move(prepared.mean);
  model.centered = centering == Centering::mean;
  return model;
}

Embedding kspca_direct_project_train(const KernelSpcaDirectModel& model) {
  return {model.theta.transpose() * model.train_kernel};
}

Embedding kspca_direct_project(const KernelSpcaDirectModel& model, const DataMatrix& x) {
  const DataMatrix arg(shifted_argument(model.mean, model.centered, x, model.train_data));
  const DataMatrix train = model.centered ? DataMatrix(model.train_data.values().colwise() - model.mean)
                                          : model.train_data;
  const Matrix kt = kernel_matrix(model.spec, train, arg).entries;
  return {model.theta.transpose() * kt};
}

KernelSpcaDualModel fit_kspca_dual(const DataMatrix& x, const KernelSpec& spec, const Matrix& ky,
                                   std::optional<Index> p, Centering centering) {
  auto prepared = prepare(x, spec, ky, centering);
  KernelSpcaDualModel model;
  model.delta = decompose_label_kernel(ky);
  const Matrix centered_kx = center_train_kernel(prepared.kernel);
  Matrix op = model.delta.transpose() * centered_kx * model.delta;
  op = (0.5 * (op + op.transpose())).eval();
  const EigenPairs eig = sym_eig_sorted(op);
  const double floor = 1e-10 * centered_kx.norm() * ky.norm();
  const Index k = detail::select_positive_spectrum(eig.values, op.rows(), p, "kernel SPCA (dual)", floor);

  model.right_vectors = eig.vectors.leftCols(k);
  model.singular = eig.values.head(k).cwiseSqrt();
  model.spec = spec;
  model.train_data = x;
  model.train_kernel = std::move(prepared.kernel);
  model.mean = std::move(prepared.mean);
  model.centered = centering == Centering::mean;
  return model;
}

Embedding kspca_dual_project_train(const KernelSpcaDualModel& model) {
  const Matrix coeffs = model.right_vectors.transpose() * (model.delta.transpose() * left_center(model.train_kernel));
  return {model.singular.cwiseInverse().asDiagonal() * coeffs};
}

Embedding kspca_dual_project(const KernelSpcaDualModel& model, const DataMatrix& x) {
  const DataMatrix arg(shifted_argument(model.mean, model.centered, x, model.train_data));
  const DataMatrix train = model.centered ? DataMatrix(model.train_data.values().colwise() - model.mean)
                                          : model.train_data;
  const Matrix kt = kernel_matrix(model.spec, train, arg).entries;
  const Matrix coeffs = model.right_vectors.transpose() * (model.delta.transpose() * left_center(kt));
  return {model.singular.cwiseInverse().asDiagonal() * coeffs};
}

namespace {

[[noreturn]] void unsupported(const char* route, const KernelSpec& spec, ReconstructionTarget target) {
  const char* what = target == ReconstructionTarget::training ? "training" : "out-of-sample";
  throw Error(ErrorCode::ReconstructionUnsupported,
              std::string("kernel SPCA (") + route + ", " + std::string(to_string(spec.family)) +
                  " kernel) cannot reconstruct " + what +
                  " data: the feature map is only available through kernel evaluations");
}

}  // namespace

void kspca_reconstruct_any(const KernelSpcaDirectModel& model, ReconstructionTarget target) {
  unsupported("direct", model.spec, target);
}

void kspca_reconstruct_any(const KernelSpcaDualModel& model, ReconstructionTarget target) {
  unsupported("dual", model.spec, target);
}

}  // namespace pcakit
