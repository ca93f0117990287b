#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "kaczmarz/linalg.hpp"
#include "kaczmarz/signal.hpp"

namespace kaczmarz {

struct SolverConfig {
  std::size_t max_iterations = 1000;
  /// Support floor k-hat; required (>= 1) by SRK, ignored by RK.
  std::size_t support_floor = 0;
  std::uint64_t seed = 0;
  /// Stop once the relative residual at a traced iteration is <= this; 0 disables.
  double residual_tolerance = 0.0;
  std::size_t trace_stride = 1;
  /// Record |S| for every SRK iteration (diagnostics and tests).
  bool record_support_sizes = false;
  /// Called with (iteration, max_iterations) every 10% of the budget.
  std::function<void(std::size_t, std::size_t)> progress;
};

struct SupportEstimate {
  std::vector<std::size_t> indices;  // 0-based, ascending
  std::size_t iteration = 0;
};

struct IterationTrace {
  std::vector<std::size_t> iterations;  // strictly increasing
  Vector relative_error;                // NaN when no ground truth was supplied
  Vector relative_residual;
  Vector solution;
  std::size_t iterations_used = 0;
  std::vector<std::size_t> support_sizes;  // only with record_support_sizes
};

/// x + ((b_i - <a_i, x>) / |a_i|^2) a_i
Vector rk_step(std::span<const double> x, std::span<const double> row, double rhs);

/// x + ((b_i - <w.a_i, x>) / |w.a_i|^2) (w.a_i) for an arbitrary weight
/// vector (zeros allowed as long as w.a_i != 0). With w = 1 the result is
/// bit-identical to rk_step.
Vector srk_step(std::span<const double> x, std::span<const double> row, double rhs,
                std::span<const double> weights);

/// max(k-hat, n - j + 1) clamped to [1, n].
std::size_t support_size(std::size_t support_floor, std::size_t iteration, std::size_t n) noexcept;

/// Positions of the support_size(...) largest-magnitude entries of x, ties
/// broken toward the lower index.
SupportEstimate support_estimate(std::span<const double> x, std::size_t support_floor,
                                 std::size_t iteration);

/// 1 on the support, 1/sqrt(j) elsewhere.
Vector weight_vector(const SupportEstimate& support, std::size_t iteration, std::size_t n);

/// Randomized Kaczmarz from x0 = 0 with norm-proportional row sampling.
IterationTrace solve_rk(const DenseMatrix& a, std::span<const double> b, const SolverConfig& config,
                        const SparseSignal* truth = nullptr);

/// Sparse randomized Kaczmarz: each iteration samples a row exactly as RK
/// does, re-estimates the support from the current iterate, and projects onto
/// the reweighted row. The iteration counter j starts at 1 and never resets.
IterationTrace solve_srk(const DenseMatrix& a, std::span<const double> b, const SolverConfig& config,
                         const SparseSignal* truth = nullptr);

/// RK on the column-restricted system A_S x_S = b. Iterates are embedded back
/// into R^n (zero off `columns`) before errors are measured.
IterationTrace solve_rk_reduced(const DenseMatrix& a, std::span<const double> b,
                                std::span<const std::size_t> columns, const SolverConfig& config,
                                const SparseSignal* truth = nullptr);

/// |Ax - b| / |b| (absolute residual when b = 0).
double relative_residual(const DenseMatrix& a, std::span<const double> x, std::span<const double> b);

}  // namespace kaczmarz
