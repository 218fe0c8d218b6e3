#include "pcakit/linalg.hpp"

#include "pcakit/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace pcakit {

namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::DegenerateInput, std::string(what) + " contains non-finite entries");
  }
}

}  // namespace

DataMatrix::DataMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw Error(ErrorCode::InvalidDimension, "data matrix must be at least 1x1, got " +
                                                 std::to_string(values_.rows()) + "x" +
                                                 std::to_string(values_.cols()));
  }
  require_finite(values_, "data matrix");
}

Matrix centering_matrix(Index m) {
  if (m < 1) throw Error(ErrorCode::InvalidDimension, "centering matrix size must be >= 1");
  return Matrix::Identity(m, m) - Matrix::Constant(m, m, 1.0 / static_cast<double>(m));
}

Matrix right_center(const Matrix& a) {
  if (a.cols() == 0) return a;
  const Vector mean = a.rowwise().mean();
  return a.colwise() - mean;
}

Matrix left_center(const Matrix& a) {
  if (a.rows() == 0) return a;
  const Eigen::RowVectorXd mean = a.colwise().mean();
  return a.rowwise() - mean;
}

Matrix two_sided_center(const Matrix& a) { return right_center(left_center(a)); }

Matrix double_center(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::InvalidDimension, "double_center needs a square matrix, got " +
                                                 std::to_string(a.rows()) + "x" +
                                                 std::to_string(a.cols()));
  }
  return two_sided_center(a);
}

CenteredData center_data(const Matrix& x) {
  CenteredData out;
  out.mean = x.rowwise().mean();
  out.entries = x.colwise() - out.mean;
  return out;
}

CenteredData center_data(const DataMatrix& x) { return center_data(x.values()); }

namespace {

// Column-pivoted QR of U with a rank check; shared by the two projection ops.
Eigen::ColPivHouseholderQR<Matrix> full_rank_qr(const Matrix& u) {
  if (u.cols() == 0 || u.rows() < u.cols()) {
    throw Error(ErrorCode::SingularSystem,
                "U^T U is singular: U is " + std::to_string(u.rows()) + "x" + std::to_string(u.cols()));
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(u);
  qr.setThreshold(static_cast<double>(std::max(u.rows(), u.cols())) *
                  std::numeric_limits<double>::epsilon());
  if (qr.rank() < u.cols()) {
    throw Error(ErrorCode::SingularSystem, "U has rank " + std::to_string(qr.rank()) + " < " +
                                               std::to_string(u.cols()) + " columns");
  }
  return qr;
}

}  // namespace

Vector projection_coefficients(const Matrix& u, const Vector& x) {
  if (u.rows() != x.size()) {
    throw Error(ErrorCode::InvalidDimension, "U has " + std::to_string(u.rows()) +
                                                 " rows but x has length " + std::to_string(x.size()));
  }
  return full_rank_qr(u).solve(x);
}

Matrix hat_matrix(const Matrix& u) {
  const auto qr = full_rank_qr(u);
  const Matrix q = qr.householderQ() * Matrix::Identity(u.rows(), u.cols());
  return q * q.transpose();
}

Vector canonical_signs(const Matrix& m) {
  Vector signs = Vector::Ones(m.cols());
  for (Index j = 0; j < m.cols(); ++j) {
    Index best = 0;
    double best_abs = -1.0;
    for (Index i = 0; i < m.rows(); ++i) {
      const double v = std::abs(m(i, j));
      if (v > best_abs) {
        best_abs = v;
        best = i;
      }
    }
    if (m.rows() > 0 && m(best, j) < 0.0) signs(j) = -1.0;
  }
  return signs;
}

Matrix canonical_sign(Matrix m) {
  const Vector signs = canonical_signs(m);
  for (Index j = 0; j < m.cols(); ++j) m.col(j) *= signs(j);
  return m;
}

Index effective_rank(std::span<const double> singular, Index rows, Index cols) {
  if (singular.empty() || !(singular.front() > 0.0)) return 0;
  const double tol = static_cast<double>(std::max(rows, cols)) *
                     std::numeric_limits<double>::epsilon() * singular.front();
  return static_cast<Index>(
      std::count_if(singular.begin(), singular.end(), [tol](double s) { return s > tol; }));
}

Index effective_rank(const Vector& singular, Index rows, Index cols) {
  return effective_rank(std::span<const double>(singular.data(), static_cast<std::size_t>(singular.size())),
                        rows, cols);
}

SvdFactors svd(const Matrix& a, SvdMode mode) {
  require_finite(a, "svd input");
  SvdFactors out;
  out.mode = mode;
  const Index rows = a.rows();
  const Index cols = a.cols();
  if (rows == 0 || cols == 0) {
    out.left = Matrix(rows, 0);
    out.right = Matrix(cols, 0);
    out.singular = Vector(0);
    return out;
  }

  const unsigned options = mode == SvdMode::complete ? (Eigen::ComputeFullU | Eigen::ComputeFullV)
                                                     : (Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::BDCSVD<Matrix> solver(a, options);
  const Vector& values = solver.singularValues();

  if (mode == SvdMode::incomplete) {
    const Index p = effective_rank(values, rows, cols);
    out.singular = values.head(p);
    out.left = solver.matrixU().leftCols(p);
    out.right = solver.matrixV().leftCols(p);
  } else {
    out.singular = values;
    out.left = solver.matrixU();
    out.right = solver.matrixV();
  }

  // Paired columns flip together; unpaired trailing columns of a complete
  // factorization are canonicalized on their own.
  const Vector left_signs = canonical_signs(out.left);
  const Index paired = out.singular.size();
  for (Index j = 0; j < out.left.cols(); ++j) out.left.col(j) *= left_signs(j);
  for (Index j = 0; j < paired; ++j) out.right.col(j) *= left_signs(j);
  if (out.right.cols() > paired) {
    const Index extra = out.right.cols() - paired;
    out.right.rightCols(extra) = canonical_sign(out.right.rightCols(extra));
  }
  return out;
}

double asymmetry(const Matrix& a) {
  const double scale = a.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) return 0.0;
  return (a - a.transpose()).cwiseAbs().maxCoeff() / scale;
}

EigenPairs sym_eig_sorted(const Matrix& a, Index p) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::InvalidDimension, "eigendecomposition needs a square matrix, got " +
                                                 std::to_string(a.rows()) + "x" +
                                                 std::to_string(a.cols()));
  }
  if (p < 1 || p > a.rows()) {
    throw Error(ErrorCode::InvalidDimension, "requested " + std::to_string(p) +
                                                 " eigenpairs of a " + std::to_string(a.rows()) +
                                                 "x" + std::to_string(a.rows()) + " matrix");
  }
  require_finite(a, "eigendecomposition input");
  const double skew = asymmetry(a);
  if (skew > 1e-9) {
    throw Error(ErrorCode::NotSymmetric, "relative asymmetry " + std::to_string(skew) + " > 1e-9");
  }
  const Matrix sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);

  // Descending order; tied eigenvalues keep the solver's column order.
  const Index n = sym.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return solver.eigenvalues()(i) > solver.eigenvalues()(j); });
  EigenPairs out;
  out.values.resize(p);
  out.vectors.resize(n, p);
  for (Index j = 0; j < p; ++j) {
    const Index k = order[static_cast<std::size_t>(j)];
    out.values(j) = solver.eigenvalues()(k);
    out.vectors.col(j) = solver.eigenvectors().col(k);
  }
  out.vectors = canonical_sign(std::move(out.vectors));
  return out;
}

EigenPairs sym_eig_sorted(const Matrix& a) { return sym_eig_sorted(a, a.rows()); }

}  // namespace pcakit
