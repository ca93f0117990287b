#include <doctest.h>

#include <cmath>
#include <limits>

#include "kaczmarz/errors.hpp"
#include "kaczmarz/linalg.hpp"
#include "kaczmarz/random.hpp"

using namespace kaczmarz;

TEST_CASE("dot") {
  CHECK(dot(Vector{1, 0, 2}, Vector{3, 1, 1}) == 5.0);
  CHECK(dot(Vector{1.5, -2, 7}, Vector{0, 0, 0}) == 0.0);
  CHECK(dot(Vector{1, 0, 0}, Vector{0, 1, 0}) == 0.0);
  CHECK_THROWS_AS(dot(Vector{1, 2}, Vector{1, 2, 3}), DimensionError);
}

TEST_CASE("hadamard") {
  CHECK(hadamard(Vector{1, 2}, Vector{3, 4}) == Vector{3, 8});
  const Vector u{0.25, -3, 9};
  CHECK(hadamard(u, Vector{1, 1, 1}) == u);
  CHECK(hadamard(u, Vector{0, 0, 0}) == Vector{0, -0.0, 0});
  CHECK_THROWS_AS(hadamard(Vector{1}, Vector{1, 2}), DimensionError);
}

TEST_CASE("norm2_sq") {
  CHECK(norm2_sq(Vector{3, 4}) == 25.0);
  CHECK(norm2_sq(Vector{0, 0, 0}) == 0.0);
  CHECK(norm2_sq(Vector{0, 0, 1, 0}) == 1.0);
}

TEST_CASE("reweighting symmetry: <w.a, x> == <a, w.x>") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(50);
    Vector w(n), a(n), x(n);
    for (std::size_t l = 0; l < n; ++l) {
      w[l] = rng.uniform();
      a[l] = rng.normal();
      x[l] = rng.normal();
    }
    const double lhs = dot(hadamard(w, a), x);
    const double rhs = dot(a, hadamard(w, x));
    double scale = 0.0;
    for (std::size_t l = 0; l < n; ++l) scale += std::abs(w[l] * a[l] * x[l]);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(scale, 1e-300));
  }
}

TEST_CASE("DenseMatrix invariants") {
  const auto a = DenseMatrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  CHECK(a.rows() == 2);
  CHECK(a.cols() == 3);
  CHECK(a.row(1).size() == 3);
  CHECK(a.row(1)[0] == 4.0);
  CHECK(a.row(1).data() == a.row(0).data() + 3);
  CHECK(a.multiply(Vector{1, 0, -1}) == Vector{-2, -2});
  CHECK(a.frobenius_norm_sq() == 91.0);

  const std::size_t cols[] = {2, 0};
  const auto s = a.select_columns(cols);
  CHECK(s == DenseMatrix::from_rows({{3, 1}, {6, 4}}));
  CHECK(a.transpose() == DenseMatrix::from_rows({{1, 4}, {2, 5}, {3, 6}}));

  CHECK_THROWS_AS(DenseMatrix(2, 2, Vector{1, 2, 3}), DimensionError);
  CHECK_THROWS_AS(DenseMatrix(1, 2, Vector{1, std::numeric_limits<double>::quiet_NaN()}), ParameterError);
  CHECK_THROWS_AS(DenseMatrix::from_rows({{1, 2}, {3}}), DimensionError);
  const std::size_t bad[] = {3};
  CHECK_THROWS_AS(a.select_columns(bad), DimensionError);
  CHECK_THROWS_AS(a.multiply(Vector{1, 2}), DimensionError);
}
