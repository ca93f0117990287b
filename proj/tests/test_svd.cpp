#include <doctest.h>

#include <cmath>
#include <numeric>

#include "kaczmarz/errors.hpp"
#include "kaczmarz/random.hpp"
#include "kaczmarz/svd.hpp"
#include "oracles.hpp"

using namespace kaczmarz;

TEST_CASE("scaled condition number: analytic cases") {
  CHECK(scaled_condition_number(DenseMatrix::from_rows({{1, 0}, {0, 1}})) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(scaled_condition_number(DenseMatrix::from_rows({{1, 0}, {0, 2}})) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));

  const auto r = condition_report(DenseMatrix::from_rows({{3, 0}, {0, 4}, {0, 0}}));
  CHECK(r.frobenius_norm == doctest::Approx(5.0));
  CHECK(r.sigma_min == doctest::Approx(3.0));
  CHECK(r.kappa == doctest::Approx(5.0 / 3.0));
}

TEST_CASE("rank-deficient input is rejected") {
  CHECK_THROWS_AS(scaled_condition_number(DenseMatrix::from_rows({{1, 2}, {2, 4}})), SingularMatrixError);
  CHECK_THROWS_AS(scaled_condition_number(DenseMatrix(3, 2)), SingularMatrixError);
  // wide matrices cannot have full column rank
  CHECK_THROWS_AS(scaled_condition_number(DenseMatrix::from_rows({{1, 0, 0}, {0, 1, 0}})), SingularMatrixError);
}

TEST_CASE("Jacobi singular values match the characteristic-polynomial oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 2;
    const std::size_t m = n + rng.below(4);
    const auto a = gaussian_matrix(m, n, rng);
    const Vector jac = singular_values(a);
    const Vector ref = oracle::singular_values_charpoly(a);
    REQUIRE(jac.size() == n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(jac[i] - ref[i]) <= 1e-9 * ref[0]);
  }
}

TEST_CASE("singular values of a wide matrix equal those of its transpose") {
  Rng rng(8);
  const auto a = gaussian_matrix(3, 9, rng);
  const Vector s = singular_values(a);
  const Vector t = singular_values(a.transpose());
  REQUIRE(s.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(s[i] == doctest::Approx(t[i]).epsilon(1e-13));
  // sum of squares equals the squared Frobenius norm
  double ss = 0.0;
  for (double v : s) ss += v * v;
  CHECK(ss == doctest::Approx(a.frobenius_norm_sq()).epsilon(1e-12));
}

TEST_CASE("column subsets never increase the scaled condition number") {
  Rng rng(4242);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.below(12);
    const std::size_t m = n + rng.below(30);
    const auto a = gaussian_matrix(m, n, rng);
    std::vector<std::size_t> cols(n);
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    for (std::size_t i = 0; i + 1 < n; ++i) std::swap(cols[i], cols[i + rng.below(n - i)]);
    cols.resize(1 + rng.below(n));
    CHECK(scaled_condition_number(a.select_columns(cols)) <= scaled_condition_number(a) * (1 + 1e-9));
  }
}
