#include "support.hpp"

#include "pcakit/error.hpp"
#include "pcakit/kernel_pca.hpp"
#include "pcakit/kernel_spca.hpp"
#include "pcakit/spca.hpp"

#include <doctest.h>

#include <algorithm>

using namespace pcakit;
using testing::Rng;

namespace {

Matrix blobs(Rng& rng, const std::vector<std::string>& labels, Index d) {
  Matrix x(d, static_cast<Index>(labels.size()));
  for (Index i = 0; i < x.cols(); ++i) {
    for (Index r = 0; r < d; ++r) x(r, i) = rng.normal();
    x(0, i) += 2.0 * (labels[static_cast<std::size_t>(i)][0] - 'a');
  }
  return x;
}

}  // namespace

TEST_CASE("direct route residual and normalization") {
  Rng rng(81);
  for (int trial = 0; trial < 10; ++trial) {
    const auto labels = rng.labels(24, 3);
    const DataMatrix x(blobs(rng, labels, 4));
    const Matrix ky = delta_kernel(labels).entries;
    const KernelSpec spec = trial % 2 == 0 ? KernelSpec{KernelFamily::linear} : KernelSpec{KernelFamily::rbf, 0, 0, 1, 0.3};
    const KernelSpcaDirectModel m = fit_kspca_direct(x, spec, ky);
    const Matrix& kx = m.train_kernel;
    const Matrix lhs_op = kx * double_center(ky) * kx;
    const Matrix residual = lhs_op * m.theta - kx * m.theta * m.eigenvalues.asDiagonal();
    CHECK(residual.norm() <= 1e-6 * lhs_op.norm());
    const Matrix reg = kx + m.ridge * Matrix::Identity(kx.rows(), kx.cols());
    CHECK(testing::max_abs(m.theta.transpose() * reg * m.theta - Matrix::Identity(m.components(), m.components())) <= 1e-6);
    for (Index i = 1; i < m.components(); ++i) CHECK(m.eigenvalues(i) <= m.eigenvalues(i - 1));
    // Three classes leave two supervised directions, even through a rank-deficient linear Kx.
    CHECK(m.components() == 2);
  }
}

TEST_CASE("direct route projections") {
  Rng rng(82);
  const auto labels = rng.labels(15, 2);
  const DataMatrix x(blobs(rng, labels, 3));
  const KernelSpec rbf{KernelFamily::rbf, 0, 0, 1, 0.5};
  const KernelSpcaDirectModel m = fit_kspca_direct(x, rbf, delta_kernel(labels).entries, 1);
  const Matrix train = kspca_direct_project_train(m).entries;
  CHECK(testing::max_abs(train - m.theta.transpose() * m.train_kernel) <= 1e-12);
  for (Index i = 0; i < x.samples(); ++i)
    CHECK(testing::max_abs(kspca_direct_project(m, DataMatrix(Matrix(x.sample(i)))).entries - train.col(i)) <= 1e-9);

  const DataMatrix xt(rng.gaussian(3, 4));
  const Matrix kt = kernel_matrix(rbf, x, xt).entries;
  CHECK(testing::max_abs(kspca_direct_project(m, xt).entries - m.theta.transpose() * kt) <= 1e-12);

  KernelSpcaDirectModel identity = m;
  identity.train_kernel = Matrix::Identity(15, 15);
  CHECK(kspca_direct_project_train(identity).entries == m.theta.transpose());
}

TEST_CASE("two points with distinct labels") {
  Matrix x(2, 2);
  x << 0, 1, 1, 3;
  const Matrix ky = delta_kernel({"a", "b"}).entries;
  const KernelSpcaDirectModel m = fit_kspca_direct(DataMatrix(x), KernelSpec{KernelFamily::rbf, 0, 0, 1, 0.2}, ky, 1);
  CHECK(m.theta(0, 0) == doctest::Approx(-m.theta(1, 0)));
  CHECK(std::abs(m.theta(0, 0)) > 0.0);
}

TEST_CASE("constant label kernel has no supervised directions") {
  Rng rng(83);
  const DataMatrix x(rng.gaussian(3, 8));
  const Matrix ky = Matrix::Constant(8, 8, 1.0);
  const KernelSpec rbf{KernelFamily::rbf, 0, 0, 1, 0.5};
  auto expect_rank = [](auto&& call) {
    try {
      call();
      FAIL("fit succeeded");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::RankExceeded);
    }
  };
  expect_rank([&] { fit_kspca_direct(x, rbf, ky, 1); });
  expect_rank([&] { fit_kspca_direct_naive(x, rbf, ky, 1); });
  expect_rank([&] { fit_kspca_dual(x, rbf, ky, 1); });
}

TEST_CASE("naive route") {
  Rng rng(84);
  int agreeing = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const auto labels = rng.labels(20, 3);
    const DataMatrix x(blobs(rng, labels, 4));
    const Matrix ky = delta_kernel(labels).entries;
    const KernelSpec rbf{KernelFamily::rbf, 0, 0, 1, 0.25};
    const KernelSpcaDirectModel a = fit_kspca_direct(x, rbf, ky, 2);
    const KernelSpcaDirectModel b = fit_kspca_direct_naive(x, rbf, ky, 2);
    const Matrix norm = b.theta.transpose() * b.train_kernel * b.theta;
    CHECK(testing::max_abs(norm.diagonal() - Vector::Ones(2)) <= 1e-8);
    if (testing::mean_canonical_correlation(kspca_direct_project_train(a).entries,
                                            kspca_direct_project_train(b).entries) >= 0.99)
      ++agreeing;
  }
  CHECK(agreeing == 5);
}

TEST_CASE("naive route with identity Kx") {
  const Matrix ky = delta_kernel({"a", "b", "a", "c", "b", "a"}).entries;
  // Kx = I exactly for orthonormal samples and a linear kernel.
  const DataMatrix x(Matrix::Identity(6, 6));
  const KernelSpcaDirectModel m = fit_kspca_direct_naive(x, KernelSpec{KernelFamily::linear}, ky, 2);
  const EigenPairs ref = sym_eig_sorted(double_center(ky), 2);
  CHECK(testing::max_abs(m.eigenvalues - ref.values) <= 1e-10);
  CHECK((testing::projector(m.theta) - testing::projector(ref.vectors)).norm() <= 1e-8);
}

TEST_CASE("dual route") {
  Rng rng(85);
  for (int trial = 0; trial < 8; ++trial) {
    const auto labels = rng.labels(18, 3);
    const DataMatrix x(blobs(rng, labels, 5));
    const Matrix ky = delta_kernel(labels).entries;
    const KernelSpec poly{KernelFamily::polynomial, 0.2, 1, 2};
    const KernelSpcaDualModel m = fit_kspca_dual(x, poly, ky);
    const Matrix op = m.delta.transpose() * double_center(m.train_kernel) * m.delta;
    const Vector sq = m.singular.array().square().matrix();
    CHECK(testing::max_abs(op * m.right_vectors - m.right_vectors * sq.asDiagonal()) <= 1e-7 * op.norm());
    const Vector oracle = sym_eig_sorted(op, m.components()).values;
    CHECK(testing::max_abs(sq - oracle) <= 1e-8 * oracle(0));

    const Matrix train = kspca_dual_project_train(m).entries;
    const Matrix explicit_train = m.singular.cwiseInverse().asDiagonal() * m.right_vectors.transpose() *
                                  m.delta.transpose() * left_center(m.train_kernel);
    CHECK(testing::max_abs(train - explicit_train) <= 1e-10 * (1 + testing::max_abs(train)));
    for (Index i = 0; i < x.samples(); ++i)
      CHECK(testing::max_abs(kspca_dual_project(m, DataMatrix(Matrix(x.sample(i)))).entries - train.col(i)) <=
            1e-8 * (1 + testing::max_abs(train)));
  }
}

TEST_CASE("dual route with identity labels reproduces kernel PCA") {
  Rng rng(86);
  for (int trial = 0; trial < 5; ++trial) {
    const DataMatrix x(rng.spread(rng.integer(2, 20), 12));
    const Matrix id = Matrix::Identity(12, 12);
    const Vector mean_weights = Vector::Constant(12, 1.0 / 12.0);
    for (const KernelSpec& spec : {KernelSpec{KernelFamily::linear}, KernelSpec{KernelFamily::rbf, 0, 0, 1, 0.05}}) {
      const KernelModel k = fit_kpca(x, spec, 2);
      const Matrix ref = project_train(k).entries;
      const double tol = 1e-7 * (1 + testing::max_abs(ref));
      for (Centering centering : {Centering::none, Centering::mean}) {
        const KernelSpcaDualModel s = fit_kspca_dual(x, spec, id, 2, centering);
        const Matrix e = kspca_dual_project_train(s).entries;
        // H Kx differs from H Kx H by a constant column, shifting each component by a constant.
        const Vector offset = s.singular.cwiseInverse().asDiagonal() *
                              (s.right_vectors.transpose() * (s.delta.transpose() * (left_center(s.train_kernel) * mean_weights)));
        CHECK(testing::max_abs(e.rowwise().mean() - offset) <= tol);
        CHECK(testing::max_abs(testing::align_rows(e.colwise() - offset, ref) - ref) <= tol);
        if (spec.family == KernelFamily::linear && centering == Centering::mean) {
          CHECK(testing::max_abs(offset) <= tol);
          CHECK(testing::max_abs(testing::align_rows(e, ref) - ref) <= tol);
        }
      }
    }
  }
}

TEST_CASE("route agreement on well-conditioned data") {
  Rng rng(87);
  for (int trial = 0; trial < 5; ++trial) {
    const auto labels = rng.labels(30, 3);
    const DataMatrix x(blobs(rng, labels, 4));
    const Matrix ky = delta_kernel(labels).entries;
    const KernelSpec rbf{KernelFamily::rbf, 0, 0, 1, 0.25};
    const Matrix a = kspca_direct_project_train(fit_kspca_direct(x, rbf, ky, 2)).entries;
    const Matrix b = kspca_dual_project_train(fit_kspca_dual(x, rbf, ky, 2)).entries;
    CHECK(testing::mean_canonical_correlation(a, b) >= 0.99);
  }
}

TEST_CASE("class relabeling leaves embeddings unchanged") {
  Rng rng(88);
  const auto labels = rng.labels(20, 3);
  std::vector<std::string> renamed;
  for (const auto& l : labels) renamed.push_back(l == "a" ? "c" : (l == "c" ? "a" : "b"));
  const DataMatrix x(blobs(rng, labels, 4));
  const KernelSpec rbf{KernelFamily::rbf, 0, 0, 1, 0.25};
  const Matrix a = kspca_direct_project_train(fit_kspca_direct(x, rbf, delta_kernel(labels).entries, 2)).entries;
  const Matrix b = kspca_direct_project_train(fit_kspca_direct(x, rbf, delta_kernel(renamed).entries, 2)).entries;
  CHECK(testing::max_abs(testing::align_rows(b, a) - a) <= 1e-9 * (1 + testing::max_abs(a)));
  const Matrix c = kspca_dual_project_train(fit_kspca_dual(x, rbf, delta_kernel(labels).entries, 2)).entries;
  const Matrix d = kspca_dual_project_train(fit_kspca_dual(x, rbf, delta_kernel(renamed).entries, 2)).entries;
  CHECK(testing::max_abs(testing::align_rows(d, c) - c) <= 1e-9 * (1 + testing::max_abs(c)));
}

TEST_CASE("kernel SPCA cannot reconstruct") {
  Rng rng(89);
  const auto labels = rng.labels(10, 2);
  const DataMatrix x(blobs(rng, labels, 3));
  const Matrix ky = delta_kernel(labels).entries;
  const KernelSpec spec{KernelFamily::cosine};
  const auto direct = fit_kspca_direct(x, spec, ky, 1);
  const auto dual = fit_kspca_dual(x, spec, ky, 1);
  for (auto target : {ReconstructionTarget::training, ReconstructionTarget::out_of_sample}) {
    try {
      kspca_reconstruct_any(direct, target);
      FAIL("direct reconstruction succeeded");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ReconstructionUnsupported);
      CHECK(std::string(e.what()).find("direct") != std::string::npos);
    }
    try {
      kspca_reconstruct_any(dual, target);
      FAIL("dual reconstruction succeeded");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ReconstructionUnsupported);
      CHECK(std::string(e.what()).find("dual") != std::string::npos);
    }
  }
  Matrix bad = Matrix::Identity(10, 10);
  bad(0, 0) = -5;
  CHECK_THROWS_AS(fit_kspca_dual(x, spec, bad, 1), Error);
  CHECK_THROWS_AS(fit_kspca_direct(x, spec, Matrix::Identity(9, 9), 1), Error);
}
