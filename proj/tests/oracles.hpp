// Independent reference computations used only by the test suites. Nothing
// here calls into the solver or SVD code paths it is used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "kaczmarz/linalg.hpp"

namespace oracle {

using kaczmarz::DenseMatrix;
using kaczmarz::Vector;

/// Critical value c with P(X > c) = alpha for X ~ chi^2(df).
inline double chi_square_critical(std::size_t df, double alpha) {
  boost::math::chi_squared dist(static_cast<double>(df));
  return boost::math::quantile(boost::math::complement(dist, alpha));
}

/// Pearson statistic over bins with positive probability; returns (stat, df).
inline std::pair<double, std::size_t> chi_square_statistic(std::span<const std::size_t> counts,
                                                           std::span<const double> probs, std::size_t draws) {
  double stat = 0.0;
  std::size_t bins = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (probs[i] == 0.0) continue;
    const double expected = probs[i] * static_cast<double>(draws);
    const double d = static_cast<double>(counts[i]) - expected;
    stat += d * d / expected;
    ++bins;
  }
  return {stat, bins - 1};
}

/// Gram matrix A^T A computed entry by entry.
inline std::vector<std::vector<double>> gram(const DenseMatrix& a) {
  std::vector<std::vector<double>> g(a.cols(), std::vector<double>(a.cols(), 0.0));
  for (std::size_t p = 0; p < a.cols(); ++p)
    for (std::size_t q = 0; q < a.cols(); ++q)
      for (std::size_t i = 0; i < a.rows(); ++i) g[p][q] += a(i, p) * a(i, q);
  return g;
}

/// Singular values (descending) of a matrix with 2 or 3 columns, from the
/// roots of the characteristic polynomial of A^T A solved in closed form.
inline Vector singular_values_charpoly(const DenseMatrix& a) {
  const auto g = gram(a);
  std::vector<double> eig;
  if (a.cols() == 2) {
    // l^2 - tr l + det = 0
    const double tr = g[0][0] + g[1][1];
    const double det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    eig = {tr / 2.0 + disc, tr / 2.0 - disc};
  } else if (a.cols() == 3) {
    // l^3 - c2 l^2 + c1 l - c0 = 0, symmetric so all roots are real
    const double c2 = g[0][0] + g[1][1] + g[2][2];
    const double c1 = g[0][0] * g[1][1] - g[0][1] * g[1][0] + g[0][0] * g[2][2] - g[0][2] * g[2][0] +
                      g[1][1] * g[2][2] - g[1][2] * g[2][1];
    const double c0 = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) -
                      g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
                      g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
    // substitute l = t + c2/3 -> t^3 + p t + q = 0
    const double shift = c2 / 3.0;
    const double p = c1 - c2 * c2 / 3.0;
    const double q = -2.0 * c2 * c2 * c2 / 27.0 + c2 * c1 / 3.0 - c0;
    if (std::abs(p) < 1e-300) {
      eig = {shift, shift, shift};
    } else {
      const double r = 2.0 * std::sqrt(-p / 3.0);
      const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
      const double phi = std::acos(arg) / 3.0;
      for (int k = 0; k < 3; ++k) eig.push_back(shift + r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0));
    }
  } else {
    throw std::invalid_argument("charpoly oracle handles 2 or 3 columns only");
  }
  Vector sigma;
  for (double l : eig) sigma.push_back(std::sqrt(std::max(0.0, l)));
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  return sigma;
}

/// Solves the square system M y = r by Gaussian elimination with partial pivoting.
inline Vector gauss_solve(std::vector<std::vector<double>> m, Vector r) {
  const std::size_t n = r.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (std::abs(m[i][c]) > std::abs(m[piv][c])) piv = i;
    std::swap(m[c], m[piv]);
    std::swap(r[c], r[piv]);
    for (std::size_t i = c + 1; i < n; ++i) {
      const double f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
      r[i] -= f * r[c];
    }
  }
  Vector y(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = r[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= m[i][j] * y[j];
    y[i] = s / m[i][i];
  }
  return y;
}

/// Minimum-norm solution A^T (A A^T)^{-1} b of a full-row-rank system.
inline Vector min_norm_solution(const DenseMatrix& a, std::span<const double> b) {
  const std::size_t m = a.rows();
  std::vector<std::vector<double>> aat(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = 0; l < a.cols(); ++l) aat[i][k] += a(i, l) * a(k, l);
  const Vector y = gauss_solve(aat, Vector(b.begin(), b.end()));
  Vector x(a.cols(), 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) x[l] += a(i, l) * y[i];
  return x;
}

inline double dist(std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += (u[i] - v[i]) * (u[i] - v[i]);
  return std::sqrt(s);
}

inline double norm(std::span<const double> u) {
  double s = 0.0;
  for (double v : u) s += v * v;
  return std::sqrt(s);
}

}  // namespace oracle
