#pragma once
// Dense matrix primitives shared by every method in the toolkit: centering,
// least-squares projection, SVD / symmetric eigendecomposition with a fixed
// ordering and sign convention, and numerical rank.

#include "pcakit/types.hpp"

#include <span>

namespace pcakit {

/// I - (1/m) 1 1^T. Only tests and small examples should need the explicit
/// matrix; the centering routines below subtract means directly.
Matrix centering_matrix(Index m);

/// A H: subtracts each row's mean from that row (removes the column-mean
/// vector from every column).
Matrix right_center(const Matrix& a);

/// H A: subtracts each column's mean from that column.
Matrix left_center(const Matrix& a);

/// H_rows A H_cols for an arbitrary rectangular matrix.
Matrix two_sided_center(const Matrix& a);

/// H A H for a square matrix. Throws InvalidDimension when A is not square.
Matrix double_center(const Matrix& a);

/// Mean-centered data X H together with the removed per-feature mean.
CenteredData center_data(const DataMatrix& x);
CenteredData center_data(const Matrix& x);

/// Least-squares coefficients (U^T U)^{-1} U^T x.
/// Throws SingularSystem when U does not have full column rank.
Vector projection_coefficients(const Matrix& u, const Vector& x);

/// U (U^T U)^{-1} U^T. Throws SingularSystem when U is rank deficient.
Matrix hat_matrix(const Matrix& u);

enum class SvdMode { complete, incomplete };

/// Singular value decomposition A = left * diag(singular) * right^T.
///
/// incomplete: only singular values above the numerical rank tolerance are
///   kept; left is rows x p, right is cols x p.
/// complete: left is rows x rows, right is cols x cols and singular holds all
///   min(rows, cols) values, zeros included.
///
/// Column pairs are sign-canonicalized on the left factor; the matching right
/// column is flipped with it so the product is unchanged.
struct SvdFactors {
  Matrix left;
  Vector singular;
  Matrix right;
  SvdMode mode = SvdMode::incomplete;

  Index rank() const { return singular.size(); }
};

SvdFactors svd(const Matrix& a, SvdMode mode = SvdMode::incomplete);

struct EigenPairs {
  Matrix vectors;
  Vector values;
};

/// Top-p eigenpairs of a symmetric matrix, values descending, vectors
/// sign-canonicalized. Throws NotSymmetric when the relative asymmetry
/// exceeds 1e-9 and InvalidDimension when p is outside [1, dim].
EigenPairs sym_eig_sorted(const Matrix& a, Index p);

/// Full spectrum variant (p = dim).
EigenPairs sym_eig_sorted(const Matrix& a);

/// Count of values strictly above max(rows, cols) * eps * values[0].
Index effective_rank(std::span<const double> singular, Index rows, Index cols);
Index effective_rank(const Vector& singular, Index rows, Index cols);

/// Per-column sign (+1 / -1) that makes the largest-magnitude entry of each
/// column positive. Ties in magnitude resolve to the lowest row index.
Vector canonical_signs(const Matrix& m);

Matrix canonical_sign(Matrix m);

/// Relative asymmetry max|A - A^T| / max|A| (0 for the zero matrix).
double asymmetry(const Matrix& a);

}  // namespace pcakit
