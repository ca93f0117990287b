#pragma once

#include "kaczmarz/linalg.hpp"

namespace kaczmarz {

/// Singular values of A in descending order, min(rows, cols) of them.
///
/// One-sided (Hestenes) Jacobi: column pairs are rotated until every pair is
/// orthogonal to 1e-12 relative, then the column norms are the singular
/// values. Intended for desk-scale diagnostics only; cost is O(sweeps * m n^2).
Vector singular_values(const DenseMatrix& a);

struct ConditionReport {
  double frobenius_norm = 0.0;
  double sigma_min = 0.0;
  double kappa = 0.0;  // frobenius_norm / sigma_min
};

/// Throws SingularMatrixError when A lacks full column rank, i.e. when
/// rows < cols or sigma_min < 1e-12 * |A|_F.
ConditionReport condition_report(const DenseMatrix& a);

/// |A|_F / sigma_min(A).
double scaled_condition_number(const DenseMatrix& a);

}  // namespace kaczmarz
