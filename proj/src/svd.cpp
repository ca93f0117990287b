#include "kaczmarz/svd.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "kaczmarz/errors.hpp"

namespace kaczmarz {

namespace {

constexpr double kOrthogonalityTol = 1e-12;
constexpr int kMaxSweeps = 100;

// columns of a tall matrix, each contiguous
std::vector<Vector> columns_of(const DenseMatrix& a) {
  std::vector<Vector> cols(a.cols(), Vector(a.rows()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) cols[j][i] = a(i, j);
  return cols;
}

}  // namespace

Vector singular_values(const DenseMatrix& a) {
  if (a.rows() < a.cols()) return singular_values(a.transpose());

  std::vector<Vector> u = columns_of(a);
  const std::size_t n = u.size();

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = norm2_sq(u[p]);
        const double beta = norm2_sq(u[q]);
        const double gamma = dot(u[p], u[q]);
        if (gamma == 0.0 || std::abs(gamma) <= kOrthogonalityTol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < u[p].size(); ++i) {
          const double up = u[p][i];
          const double uq = u[q][i];
          u[p][i] = c * up - s * uq;
          u[q][i] = s * up + c * uq;
        }
      }
    }
    if (!rotated) break;
  }

  Vector sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm2(u[j]);
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  return sigma;
}

ConditionReport condition_report(const DenseMatrix& a) {
  ConditionReport r;
  r.frobenius_norm = std::sqrt(a.frobenius_norm_sq());
  if (a.rows() < a.cols()) {
    throw SingularMatrixError("scaled condition number: " + std::to_string(a.rows()) + "x" +
                              std::to_string(a.cols()) + " matrix cannot have full column rank");
  }
  const Vector sigma = singular_values(a);
  r.sigma_min = sigma.empty() ? 0.0 : sigma.back();
  if (r.frobenius_norm == 0.0 || r.sigma_min < 1e-12 * r.frobenius_norm) {
    throw SingularMatrixError("scaled condition number: matrix is rank deficient (sigma_min = " +
                              std::to_string(r.sigma_min) + ")");
  }
  r.kappa = r.frobenius_norm / r.sigma_min;
  return r;
}

double scaled_condition_number(const DenseMatrix& a) { return condition_report(a).kappa; }

}  // namespace kaczmarz
