#include "support.hpp"

#include "pcakit/dual_pca.hpp"
#include "pcakit/error.hpp"
#include "pcakit/pca.hpp"

#include <doctest.h>

#include <cmath>

using namespace pcakit;
using testing::Rng;

TEST_CASE("two-point dual fit") {
  Matrix x(2, 2);
  x << -1, 1, 0, 0;
  const DualModel m = fit_dual(DataMatrix(x), 1);
  CHECK(m.singular(0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(std::abs(m.right_vectors(0, 0)) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(m.right_vectors(0, 0) == doctest::Approx(-m.right_vectors(1, 0)));
  const Matrix e = project_train(m).entries;
  CHECK(std::abs(e(0, 0)) == doctest::Approx(1.0));
  CHECK(e(0, 1) == doctest::Approx(-e(0, 0)));
  CHECK(testing::max_abs(reconstruct_train(m) - x) <= 1e-14);

  CHECK_THROWS_AS(fit_dual(DataMatrix(Matrix::Constant(4, 3, 1.0)), 1), Error);
  CHECK_THROWS_AS(fit_dual(DataMatrix(Matrix::Ones(4, 1))), Error);
}

TEST_CASE("gram spectrum when d >> n") {
  Rng rng(51);
  const DataMatrix x(rng.gaussian(30, 5));
  const DualModel m = fit_dual(x);
  const Matrix xc = center_data(x).entries;
  const EigenPairs g = sym_eig_sorted(xc.transpose() * xc, m.components());
  CHECK(m.components() == 4);
  for (Index i = 0; i < m.components(); ++i)
    CHECK(m.singular(i) * m.singular(i) == doctest::Approx(g.values(i)).epsilon(1e-8));
  const Matrix e = project_train(m).entries;
  for (Index i = 0; i < m.components(); ++i) CHECK(e.row(i).norm() == doctest::Approx(m.singular(i)));
}

TEST_CASE("dual operations match direct PCA") {
  Rng rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    const bool wide = trial % 2 == 0;
    const Index d = wide ? rng.integer(40, 200) : rng.integer(2, 8);
    const Index n = wide ? rng.integer(4, 12) : rng.integer(10, 30);
    const DataMatrix x(rng.spread(d, n));
    const Index p = std::min(d, n - 1) > 2 ? 2 : 1;
    const LinearSubspaceModel direct = fit_pca_svd(x, p);
    const DualModel dual = fit_dual(x, p);

    const Matrix u = dual.directions();
    CHECK(testing::max_abs(u.transpose() * u - Matrix::Identity(p, p)) <= 1e-8);
    CHECK((testing::projector(u) - testing::projector(direct.directions)).norm() <= 1e-7);
    CHECK(testing::max_abs(dual.right_vectors.transpose() * dual.right_vectors - Matrix::Identity(p, p)) <= 1e-9);

    const Matrix ref_train = project(direct, x).entries;
    CHECK(testing::max_abs(testing::align_rows(project_train(dual).entries, ref_train) - ref_train) <=
          1e-10 * (1 + testing::max_abs(ref_train)));
    CHECK(testing::max_abs(reconstruct_train(dual) - reconstruct(direct, project(direct, x))) <=
          1e-8 * (1 + testing::max_abs(x.values())));

    const DataMatrix xt(rng.spread(d, 3));
    const Matrix ref_oos = project(direct, xt).entries;
    CHECK(testing::max_abs(testing::align_rows(project_oos(dual, xt).entries, ref_oos) - ref_oos) <=
          1e-8 * (1 + testing::max_abs(ref_oos)));
    CHECK(testing::max_abs(reconstruct_oos(dual, xt) - reconstruct(direct, project(direct, xt))) <=
          1e-7 * (1 + testing::max_abs(xt.values())));
  }
}

TEST_CASE("replayed and mean columns") {
  Rng rng(53);
  const DataMatrix x(rng.spread(5, 12));
  const DualModel m = fit_dual(x);
  const Matrix train = project_train(m).entries;
  for (Index i = 0; i < x.samples(); ++i) {
    const DataMatrix col(Matrix(x.sample(i)));
    CHECK(testing::max_abs(project_oos(m, col).entries - train.col(i)) <= 1e-9);
    CHECK(testing::max_abs(reconstruct_oos(m, col) - Matrix(x.sample(i))) <= 1e-7);
  }
  const DataMatrix mean(Matrix(m.mean));
  CHECK(project_oos(m, mean).entries.isZero(1e-12));
  CHECK(testing::max_abs(reconstruct_oos(m, mean) - Matrix(m.mean)) <= 1e-12);
  CHECK(testing::relative(reconstruct_train(m), x.values()) <= 1e-8);

  Matrix rank_one = rng.gaussian(6, 1) * rng.gaussian(1, 8);
  const DualModel r1 = fit_dual(DataMatrix(rank_one), 1);
  CHECK(testing::relative(reconstruct_train(r1), rank_one) <= 1e-12);

  CHECK_THROWS_AS(project_oos(m, DataMatrix(Matrix::Ones(4, 1))), Error);
  CHECK_THROWS_AS(reconstruct_oos(m, DataMatrix(Matrix::Ones(4, 1))), Error);
}
