#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "helpers.hpp"
#include "otkit/error.hpp"
#include "otkit/pca.hpp"
#include "otkit/rng.hpp"

using namespace otkit;

namespace {

// All 2^d sign combinations: columns are exactly orthogonal with equal
// variance, so the correlation matrix is the identity and every eigenvalue
// is 1 (each dimension carries 1/d of the variance).
Eigen::MatrixXd full_factorial(int d) {
  const int n = 1 << d;
  Eigen::MatrixXd m(n, d);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = (r >> c) & 1 ? 1.0 : -1.0;
  return m;
}

Eigen::MatrixXd random_rows(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(n, d);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = rng.uniform();
  return m;
}

}  // namespace

TEST_SUITE("pca") {

TEST_CASE("collinear data keeps a single component") {
  Eigen::MatrixXd rows(3, 2);
  rows << 0, 0, 1, 1, 2, 2;
  for (double vc : {0.05, 0.5, 1.0}) {
    const auto m = pca_fit(rows, vc);
    CHECK(pca_output_dims(m) == 1);
  }
}

TEST_CASE("equal eigenvalues retain the minimal prefix") {
  const auto rows = full_factorial(4);  // four directions, 25% variance each
  const auto m = pca_fit(rows, 0.1);
  CHECK(pca_output_dims(m) == 1);  // 0.25 >= 0.1 already

  const auto half = pca_fit(rows, 0.5);
  CHECK(pca_output_dims(half) == 2);

  const auto all = pca_fit(rows, 1.0);
  CHECK(pca_output_dims(all) == 4);
}

TEST_CASE("retained count is minimal for the coverage rule") {
  const auto rows = random_rows(40, 8, 77);
  for (double vc : {0.1, 0.3, 0.6, 0.9}) {
    const auto m = pca_fit(rows, vc);
    double total = 0.0;
    for (double v : m.eigenvalues) total += v;
    double cum = 0.0;
    const auto k = static_cast<std::size_t>(pca_output_dims(m));
    for (std::size_t i = 0; i < k; ++i) cum += m.eigenvalues[i];
    CHECK(cum / total >= vc);
    if (k > 1)
      CHECK((cum - m.eigenvalues[k - 1]) / total < vc);
  }
}

TEST_CASE("components are orthonormal and eigenvalues sorted") {
  const auto rows = random_rows(30, 6, 5);
  const auto m = pca_fit(rows, 1.0);
  const Eigen::MatrixXd gram = m.components * m.components.transpose();
  CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols()))
            .cwiseAbs()
            .maxCoeff() < 1e-9);
  for (std::size_t i = 1; i < m.eigenvalues.size(); ++i)
    CHECK(m.eigenvalues[i] <= m.eigenvalues[i - 1] + 1e-12);
}

TEST_CASE("transforming the mean row gives the zero vector") {
  const auto rows = random_rows(25, 5, 9);
  const auto m = pca_fit(rows, 1.0);
  const Eigen::MatrixXd mean = rows.colwise().mean();
  const auto proj = pca_transform(m, mean);
  CHECK(proj.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("projected training variance equals the eigenvalue") {
  const auto rows = random_rows(50, 7, 13);
  const auto m = pca_fit(rows, 1.0);
  const auto proj = pca_transform(m, rows);
  const Eigen::RowVectorXd mean = proj.colwise().mean();
  for (Eigen::Index c = 0; c < proj.cols(); ++c) {
    const double var = (proj.col(c).array() - mean(c)).square().sum() /
                       double(proj.rows() - 1);
    CHECK(var == doctest::Approx(m.eigenvalues[static_cast<std::size_t>(c)])
                     .epsilon(1e-6));
  }

  // Components of the projection are pairwise uncorrelated.
  const Eigen::MatrixXd centered = proj.rowwise() - mean;
  const Eigen::MatrixXd cov =
      (centered.transpose() * centered) / double(proj.rows() - 1);
  const double lead = m.eigenvalues[0];
  for (Eigen::Index i = 0; i < cov.rows(); ++i)
    for (Eigen::Index j = 0; j < cov.cols(); ++j)
      if (i != j) CHECK(std::abs(cov(i, j)) < 1e-6 * lead);
}

TEST_CASE("transform is row-independent") {
  const auto rows = random_rows(12, 4, 21);
  const auto m = pca_fit(rows, 1.0);
  Eigen::MatrixXd reversed(rows.rows(), rows.cols());
  for (Eigen::Index r = 0; r < rows.rows(); ++r)
    reversed.row(r) = rows.row(rows.rows() - 1 - r);
  const auto a = pca_transform(m, rows);
  const auto b = pca_transform(m, reversed);
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    CHECK((a.row(r) - b.row(b.rows() - 1 - r)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("degenerate inputs are rejected") {
  CHECK_THROWS_AS(pca_fit(Eigen::MatrixXd::Zero(1, 3), 0.5), Error);
  CHECK_THROWS_AS(pca_fit(Eigen::MatrixXd::Zero(5, 3), 0.5), Error);
  CHECK_THROWS_AS(pca_fit(random_rows(5, 3, 1), 0.0), Error);
  CHECK_THROWS_AS(pca_fit(random_rows(5, 3, 1), 1.5), Error);

  const auto m = pca_fit(random_rows(6, 3, 2), 1.0);
  CHECK_THROWS_AS(pca_transform(m, random_rows(4, 2, 3)), Error);
}

TEST_CASE("zero-variance columns are dropped before decomposition") {
  Eigen::MatrixXd rows = random_rows(10, 3, 33);
  rows.col(1).setConstant(4.2);
  const auto m = pca_fit(rows, 1.0);
  CHECK(pca_output_dims(m) == 2);
  CHECK(pca_input_dims(m) == 3);
  const auto proj = pca_transform(m, rows);
  CHECK(proj.cols() == 2);
}

TEST_CASE("model serialization round-trips") {
  const auto rows = random_rows(15, 4, 8);
  const auto m = pca_fit(rows, 0.8);
  const auto back = pca_from_json(pca_to_json(m));
  CHECK((back.means - m.means).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.scales - m.scales).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.components - m.components).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.eigenvalues == m.eigenvalues);
  CHECK(back.variance_covered == m.variance_covered);
  const auto a = pca_transform(m, rows);
  const auto b = pca_transform(back, rows);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

}  // TEST_SUITE
