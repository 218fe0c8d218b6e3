#include "support.hpp"

#include "pcakit/dual_pca.hpp"
#include "pcakit/error.hpp"
#include "pcakit/kernel_pca.hpp"

#include <doctest.h>

#include <cmath>

using namespace pcakit;
using testing::Rng;

TEST_CASE("linear kernel PCA equals dual PCA") {
  Rng rng(61);
  for (int trial = 0; trial < 15; ++trial) {
    const DataMatrix x(rng.spread(rng.integer(2, 40), rng.integer(6, 20)));
    const KernelModel k = fit_kpca(x, KernelSpec{KernelFamily::linear}, 2);
    const DualModel d = fit_dual(x, 2);
    const Matrix ref = project_train(d).entries;
    CHECK(testing::max_abs(testing::align_rows(project_train(k).entries, ref) - ref) <= 1e-8 * (1 + testing::max_abs(ref)));
    const DataMatrix xt(rng.spread(x.dims(), 4));
    const Matrix ref_oos = project_oos(d, xt).entries;
    CHECK(testing::max_abs(testing::align_rows(project_oos(k, xt).entries, ref_oos) - ref_oos) <=
          1e-7 * (1 + testing::max_abs(ref_oos)));
  }
}

TEST_CASE("kernel PCA spectrum and invariants") {
  Rng rng(62);
  const DataMatrix x(rng.gaussian(3, 10));
  const KernelSpec rbf{KernelFamily::rbf, 0, 0, 1, 0.5};
  const KernelModel m = fit_kpca(x, rbf, 3);
  const Matrix k = kernel_matrix(rbf, x).entries;
  const Matrix h = centering_matrix(10);
  const Matrix kc = h * k * h;
  const Vector oracle = sym_eig_sorted(kc, 3).values;
  for (Index i = 0; i < 3; ++i) CHECK(m.singular(i) * m.singular(i) == doctest::Approx(oracle(i)).epsilon(1e-10));
  CHECK(testing::max_abs(kc * m.right_vectors - m.right_vectors * m.singular.array().square().matrix().asDiagonal()) <=
        1e-7 * kc.norm());
  CHECK(testing::max_abs(m.right_vectors.transpose() * m.right_vectors - Matrix::Identity(3, 3)) <= 1e-9);

  const Matrix e = project_train(m).entries;
  CHECK(testing::max_abs(e.rowwise().sum()) <= 1e-8);
  for (Index i = 0; i < 3; ++i) CHECK(e.row(i).norm() == doctest::Approx(m.singular(i)));

  const KernelModel all = fit_kpca(x, rbf);
  const Matrix approx = all.right_vectors.leftCols(3) * m.singular.array().square().matrix().asDiagonal() *
                        all.right_vectors.leftCols(3).transpose();
  const Vector full = sym_eig_sorted(kc).values;
  CHECK((kc - approx).norm() <= full(3) * std::sqrt(10.0) + 1e-10);
  CHECK(Eigen::JacobiSVD<Matrix>(kc - approx).singularValues()(0) <= full(3) + 1e-10);

  for (Index i = 0; i < 10; ++i)
    CHECK(testing::max_abs(project_oos(m, DataMatrix(Matrix(x.sample(i)))).entries - e.col(i)) <= 1e-7);
}

TEST_CASE("two distinct points") {
  Matrix x(2, 2);
  x << 0, 1, 2, -1;
  for (const KernelSpec& spec : {KernelSpec{KernelFamily::rbf, 0, 0, 1, 0.3}, KernelSpec{KernelFamily::linear},
                                 KernelSpec{KernelFamily::polynomial, 1, 1, 2}}) {
    const KernelModel m = fit_kpca(DataMatrix(x), spec, 1);
    const Matrix e = project_train(m).entries;
    const double s = m.singular(0);
    CHECK(std::abs(e(0, 0)) == doctest::Approx(s / std::sqrt(2.0)));
    CHECK(e(0, 1) == doctest::Approx(-e(0, 0)));
  }
}

TEST_CASE("far-away out-of-sample point") {
  Rng rng(63);
  const DataMatrix x(rng.gaussian(2, 8));
  const KernelSpec rbf{KernelFamily::rbf, 0, 0, 1, 1.0};
  const KernelModel m = fit_kpca(x, rbf, 2);
  const Matrix far = Matrix::Constant(2, 1, 1e3);
  const Vector ones = Vector::Ones(8);
  const Matrix& k = m.train_kernel;
  const Vector centred = -(k * ones) / 8.0 + Vector::Constant(8, ones.dot(k * ones) / 64.0);
  const Vector oracle = m.singular.cwiseInverse().asDiagonal() * (m.right_vectors.transpose() * centred);
  CHECK(testing::max_abs(project_oos(m, DataMatrix(far)).entries - oracle) <= 1e-12);
}

TEST_CASE("kernel PCA errors") {
  try {
    fit_kpca(DataMatrix(Matrix::Constant(3, 5, 1.0)), KernelSpec{KernelFamily::rbf, 0, 0, 1, 1.0}, 1);
    FAIL("constant data fitted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankExceeded);
  }
  Rng rng(64);
  const KernelModel m = fit_kpca(DataMatrix(rng.gaussian(3, 6)), KernelSpec{KernelFamily::cosine}, 2);
  for (auto target : {ReconstructionTarget::training, ReconstructionTarget::out_of_sample}) {
    try {
      reconstruct_any(m, target);
      FAIL("reconstruction succeeded");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ReconstructionUnsupported);
      CHECK(std::string(e.what()).find("kernel PCA") != std::string::npos);
    }
  }
  CHECK_THROWS_AS(project_oos(m, DataMatrix(Matrix::Ones(2, 1))), Error);
}

TEST_CASE("indefinite sigmoid kernel") {
  Rng rng(65);
  const DataMatrix x(rng.gaussian(3, 25) * 3.0);
  const KernelSpec sigmoid{KernelFamily::sigmoid, 2.0, -1.0};
  const KernelModel m = fit_kpca(x, sigmoid);
  CHECK(m.components() >= 1);
  CHECK(m.singular.minCoeff() > 0.0);
  const Vector ev = sym_eig_sorted(center_train_kernel(kernel_matrix(sigmoid, x).entries)).values;
  const Index negatives = (ev.array() < -1e-8 * ev(0)).count();
  CHECK(m.dropped_negative == negatives);
  if (negatives > 0) {
    try {
      fit_kpca(x, sigmoid, x.samples());
      FAIL("negative eigenvalue requested");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotPositiveSemidefinite);
    }
  }
}
