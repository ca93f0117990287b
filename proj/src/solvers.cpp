#include "kaczmarz/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "kaczmarz/errors.hpp"
#include "kaczmarz/random.hpp"
#include "kaczmarz/sampler.hpp"

namespace kaczmarz {

namespace {

// In-place projection of x onto {u : <d, u> = rhs}, d = direction.
void project(std::span<double> x, std::span<const double> direction, double rhs) {
  const double denom = norm2_sq(direction);
  if (denom == 0.0) throw DegenerateRowError("projection onto a zero row");
  const double coef = (rhs - dot(direction, x)) / denom;
  for (std::size_t l = 0; l < x.size(); ++l) x[l] += coef * direction[l];
}

// Orders indices by decreasing |x|, lower index first on ties. Total order,
// so the selected top-s set does not depend on the input permutation.
struct MagnitudeOrder {
  std::span<const double> x;
  bool operator()(std::size_t p, std::size_t q) const noexcept {
    const double ap = std::abs(x[p]);
    const double aq = std::abs(x[q]);
    if (ap != aq) return ap > aq;
    return p < q;
  }
};

void select_top(std::span<const double> x, std::vector<std::size_t>& order, std::size_t count) {
  if (count < order.size()) {
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count), order.end(),
                     MagnitudeOrder{x});
  }
}

void validate_system(const DenseMatrix& a, std::span<const double> b, const SolverConfig& config) {
  if (b.size() != a.rows()) {
    throw DimensionError("rhs length " + std::to_string(b.size()) + " does not match " +
                         std::to_string(a.rows()) + " rows");
  }
  if (config.max_iterations < 1) throw ParameterError("max_iterations must be >= 1");
  if (config.trace_stride < 1) throw ParameterError("trace_stride must be >= 1");
  if (!(config.residual_tolerance >= 0.0)) throw ParameterError("residual_tolerance must be >= 0");
}

using ErrorFn = std::function<double(std::span<const double>)>;

// Shared driver: x0 = 0, sample, step, trace. `step(j, i, x)` applies one
// update for iteration j on row i.
template <class Step>
IterationTrace iterate(const DenseMatrix& a, std::span<const double> b, const SolverConfig& config,
                       const ErrorFn& error_of, Step&& step) {
  const RowSampler sampler(a);
  Rng rng(config.seed, kSolverStream);
  const std::size_t budget = config.max_iterations;
  const std::size_t progress_every = std::max<std::size_t>(1, budget / 10);

  IterationTrace trace;
  Vector x(a.cols(), 0.0);

  for (std::size_t j = 1; j <= budget; ++j) {
    const std::size_t i = sampler.sample(rng);
    step(j, i, std::span<double>(x));
    trace.iterations_used = j;

    if (config.progress && j % progress_every == 0) config.progress(j, budget);

    if (j % config.trace_stride == 0 || j == budget) {
      const double res = relative_residual(a, x, b);
      trace.iterations.push_back(j);
      trace.relative_residual.push_back(res);
      trace.relative_error.push_back(error_of ? error_of(x) : std::numeric_limits<double>::quiet_NaN());
      if (config.residual_tolerance > 0.0 && res <= config.residual_tolerance) break;
    }
  }
  trace.solution = std::move(x);
  return trace;
}

ErrorFn error_function(const SparseSignal* truth, std::size_t n) {
  if (truth == nullptr) return {};
  if (truth->dimension != n) {
    throw DimensionError("ground truth dimension " + std::to_string(truth->dimension) +
                         " does not match " + std::to_string(n) + " columns");
  }
  return [truth](std::span<const double> x) { return relative_error(x, *truth); };
}

}  // namespace

Vector rk_step(std::span<const double> x, std::span<const double> row, double rhs) {
  if (x.size() != row.size()) throw DimensionError("rk_step: length mismatch");
  Vector out(x.begin(), x.end());
  project(out, row, rhs);
  return out;
}

Vector srk_step(std::span<const double> x, std::span<const double> row, double rhs,
                std::span<const double> weights) {
  if (x.size() != row.size()) throw DimensionError("srk_step: length mismatch");
  const Vector direction = hadamard(weights, row);
  Vector out(x.begin(), x.end());
  project(out, direction, rhs);
  return out;
}

std::size_t support_size(std::size_t support_floor, std::size_t iteration, std::size_t n) noexcept {
  if (n == 0) return 0;
  const std::size_t shrinking = iteration >= n + 1 ? 0 : n - iteration + 1;
  return std::clamp<std::size_t>(std::max(support_floor, shrinking), 1, n);
}

SupportEstimate support_estimate(std::span<const double> x, std::size_t support_floor,
                                 std::size_t iteration) {
  const std::size_t n = x.size();
  if (iteration < 1) throw ParameterError("support_estimate: iteration must be >= 1");
  if (support_floor < 1 || support_floor > n) {
    throw ParameterError("support_estimate: support floor must lie in [1, n]");
  }
  const std::size_t s = support_size(support_floor, iteration, n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  select_top(x, order, s);
  order.resize(s);
  std::sort(order.begin(), order.end());
  return {std::move(order), iteration};
}

Vector weight_vector(const SupportEstimate& support, std::size_t iteration, std::size_t n) {
  if (iteration < 1) throw ParameterError("weight_vector: iteration must be >= 1");
  Vector w(n, 1.0 / std::sqrt(static_cast<double>(iteration)));
  for (std::size_t l : support.indices) {
    if (l >= n) throw DimensionError("weight_vector: support index out of range");
    w[l] = 1.0;
  }
  return w;
}

double relative_residual(const DenseMatrix& a, std::span<const double> x, std::span<const double> b) {
  double res = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double r = dot(a.row(i), x) - b[i];
    res += r * r;
  }
  const double bn = norm2(b);
  return bn > 0.0 ? std::sqrt(res) / bn : std::sqrt(res);
}

IterationTrace solve_rk(const DenseMatrix& a, std::span<const double> b, const SolverConfig& config,
                        const SparseSignal* truth) {
  validate_system(a, b, config);
  return iterate(a, b, config, error_function(truth, a.cols()),
                 [&](std::size_t, std::size_t i, std::span<double> x) { project(x, a.row(i), b[i]); });
}

IterationTrace solve_srk(const DenseMatrix& a, std::span<const double> b, const SolverConfig& config,
                         const SparseSignal* truth) {
  validate_system(a, b, config);
  const std::size_t n = a.cols();
  if (config.support_floor < 1 || config.support_floor > n) {
    throw ParameterError("solve_srk: support floor k-hat must lie in [1, " + std::to_string(n) + "], got " +
                         std::to_string(config.support_floor));
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Vector weights(n);
  Vector direction(n);
  std::vector<std::size_t> sizes;
  if (config.record_support_sizes) sizes.reserve(config.max_iterations);

  auto trace = iterate(a, b, config, error_function(truth, n),
                       [&](std::size_t j, std::size_t i, std::span<double> x) {
                         const std::size_t s = support_size(config.support_floor, j, n);
                         std::fill(weights.begin(), weights.end(), 1.0 / std::sqrt(static_cast<double>(j)));
                         if (s == n) {
                           std::fill(weights.begin(), weights.end(), 1.0);
                         } else {
                           select_top(x, order, s);
                           for (std::size_t r = 0; r < s; ++r) weights[order[r]] = 1.0;
                         }
                         if (config.record_support_sizes) sizes.push_back(s);

                         const auto row = a.row(i);
                         for (std::size_t l = 0; l < n; ++l) direction[l] = weights[l] * row[l];
                         project(x, direction, b[i]);
                       });
  trace.support_sizes = std::move(sizes);
  return trace;
}

IterationTrace solve_rk_reduced(const DenseMatrix& a, std::span<const double> b,
                                std::span<const std::size_t> columns, const SolverConfig& config,
                                const SparseSignal* truth) {
  if (columns.empty()) throw ParameterError("solve_rk_reduced: column set is empty");
  const std::size_t n = a.cols();
  const DenseMatrix reduced = a.select_columns(columns);
  validate_system(reduced, b, config);

  auto embed = [&](std::span<const double> xs, Vector& full) {
    std::fill(full.begin(), full.end(), 0.0);
    for (std::size_t k = 0; k < columns.size(); ++k) full[columns[k]] = xs[k];
  };

  ErrorFn full_error = error_function(truth, n);
  ErrorFn reduced_error;
  Vector scratch(n);
  if (full_error) {
    reduced_error = [&](std::span<const double> xs) {
      embed(xs, scratch);
      return full_error(scratch);
    };
  }

  auto trace = iterate(reduced, b, config, reduced_error,
                       [&](std::size_t, std::size_t i, std::span<double> x) { project(x, reduced.row(i), b[i]); });
  Vector full(n);
  embed(trace.solution, full);
  trace.solution = std::move(full);
  return trace;
}

}  // namespace kaczmarz
