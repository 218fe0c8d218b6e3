#pragma once

#include "pcakit/linalg.hpp"
#include "pcakit/types.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace testing {

using pcakit::Index;
using pcakit::Matrix;
using pcakit::Vector;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  Index integer(Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(engine_); }

  Matrix gaussian(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = normal();
    return m;
  }

  Vector gaussian(Index n) { return gaussian(n, 1).col(0); }

  // Random data with a clearly separated, non-degenerate spectrum.
  Matrix spread(Index d, Index n) {
    Matrix m = gaussian(d, n);
    for (Index i = 0; i < d; ++i) m.row(i) *= 1.0 + 0.6 * static_cast<double>(d - i);
    m.colwise() += gaussian(d);
    return m;
  }

  Matrix orthonormal(Index rows, Index cols) {
    Eigen::HouseholderQR<Matrix> qr(gaussian(rows, cols));
    return qr.householderQ() * Matrix::Identity(rows, cols);
  }

  Matrix spd(Index n) {
    const Matrix a = gaussian(n, n);
    return a * a.transpose() + Matrix::Identity(n, n);
  }

  std::vector<std::string> labels(Index n, Index classes) {
    std::vector<std::string> out;
    for (Index i = 0; i < n; ++i) out.push_back(std::string(1, static_cast<char>('a' + integer(0, classes - 1))));
    return out;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Flips each column of `m` to point the same way as the matching column of
// `reference`.
inline Matrix align_columns(Matrix m, const Matrix& reference) {
  for (Index j = 0; j < m.cols(); ++j)
    if (m.col(j).dot(reference.col(j)) < 0) m.col(j) *= -1.0;
  return m;
}

// Same alignment for embeddings, whose components are rows.
inline Matrix align_rows(const Matrix& m, const Matrix& reference) {
  return align_columns(m.transpose(), reference.transpose()).transpose();
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline double relative(const Matrix& a, const Matrix& b) {
  const double scale = std::max(b.norm(), 1e-300);
  return (a - b).norm() / scale;
}

inline Matrix projector(const Matrix& u) { return u * u.transpose(); }

// Mean canonical correlation between the row spaces of two p x n embeddings.
inline double mean_canonical_correlation(const Matrix& a, const Matrix& b) {
  const Matrix ac = pcakit::right_center(a).transpose();
  const Matrix bc = pcakit::right_center(b).transpose();
  Eigen::HouseholderQR<Matrix> qa(ac), qb(bc);
  const Matrix q1 = qa.householderQ() * Matrix::Identity(ac.rows(), ac.cols());
  const Matrix q2 = qb.householderQ() * Matrix::Identity(bc.rows(), bc.cols());
  Eigen::JacobiSVD<Matrix> s(q1.transpose() * q2);
  return s.singularValues().mean();
}

}  // namespace testing
