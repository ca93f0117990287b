#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kaczmarz/linalg.hpp"
#include "kaczmarz/random.hpp"

namespace kaczmarz {

/// Discrete distribution over the rows of A with p_i = |a_i|^2 / |A|_F^2.
///
/// Built once per solve and immutable afterwards, so one sampler may be
/// shared by concurrent runs as long as each run owns its Rng. Zero rows get
/// probability exactly 0 and are never returned.
class RowSampler {
 public:
  /// Throws DegenerateMatrixError when every row of A is zero.
  explicit RowSampler(const DenseMatrix& a);

  std::span<const double> probabilities() const noexcept { return probabilities_; }
  std::span<const double> prefix_sums() const noexcept { return prefix_; }
  std::span<const double> row_norms_sq() const noexcept { return row_norms_sq_; }
  double total() const noexcept { return total_; }
  std::size_t size() const noexcept { return prefix_.size(); }

  /// One uniform draw in [0, total), then binary search over the prefix sums.
  std::size_t sample(Rng& rng) const noexcept;

 private:
  std::vector<double> row_norms_sq_;
  std::vector<double> probabilities_;
  std::vector<double> prefix_;
  double total_ = 0.0;
  std::size_t last_positive_ = 0;
};

}  // namespace kaczmarz
