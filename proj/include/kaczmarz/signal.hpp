#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kaczmarz/linalg.hpp"
#include "kaczmarz/random.hpp"

namespace kaczmarz {

/// Ground-truth sparse vector with an explicit support.
///
/// `support` is sorted ascending and 0-based; `values[i]` is the (nonzero)
/// entry at `support[i]`. Every coordinate off the support is exactly zero.
struct SparseSignal {
  std::size_t dimension = 0;
  std::vector<std::size_t> support;
  Vector values;

  std::size_t sparsity() const noexcept { return support.size(); }
  Vector dense() const;
  double norm() const noexcept { return norm2(values); }

  /// Checks the invariants; throws ParameterError.
  void validate() const;
};

/// k-sparse signal in R^n: support uniform over k-subsets (partial
/// Fisher-Yates), values i.i.d. standard normal, redrawn if exactly zero.
SparseSignal gen_sparse_signal(std::size_t n, std::size_t k, Rng& rng);

/// |x - truth|_2 / |truth|_2
double relative_error(std::span<const double> x, const SparseSignal& truth);

}  // namespace kaczmarz
