#include "kaczmarz/sampler.hpp"

#include <algorithm>

#include "kaczmarz/errors.hpp"

namespace kaczmarz {

RowSampler::RowSampler(const DenseMatrix& a)
    : row_norms_sq_(a.rows()), probabilities_(a.rows()), prefix_(a.rows()) {
  double running = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    row_norms_sq_[i] = norm2_sq(a.row(i));
    running += row_norms_sq_[i];
    prefix_[i] = running;
    if (row_norms_sq_[i] > 0.0) {
      any = true;
      last_positive_ = i;
    }
  }
  if (!any) throw DegenerateMatrixError("row sampler: matrix has no nonzero row");
  total_ = running;
  for (std::size_t i = 0; i < a.rows(); ++i) probabilities_[i] = row_norms_sq_[i] / total_;
}

std::size_t RowSampler::sample(Rng& rng) const noexcept {
  const double u = rng.uniform() * total_;
  // first index whose prefix sum exceeds u; a zero row shares its prefix with
  // the row before it and so can never be the first to exceed u
  auto it = std::upper_bound(prefix_.begin(), prefix_.end(), u);
  if (it == prefix_.end()) return last_positive_;  // u rounded up to total
  return static_cast<std::size_t>(it - prefix_.begin());
}

}  // namespace kaczmarz
