#include "kaczmarz/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kaczmarz/errors.hpp"

namespace kaczmarz {

Vector SparseSignal::dense() const {
  Vector x(dimension, 0.0);
  for (std::size_t i = 0; i < support.size(); ++i) x[support[i]] = values[i];
  return x;
}

void SparseSignal::validate() const {
  if (support.size() != values.size()) throw ParameterError("SparseSignal: support/values length mismatch");
  if (support.size() > dimension) throw ParameterError("SparseSignal: support larger than dimension");
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] >= dimension) throw ParameterError("SparseSignal: support index out of range");
    if (i > 0 && support[i] <= support[i - 1]) throw ParameterError("SparseSignal: support not strictly increasing");
    if (values[i] == 0.0 || !std::isfinite(values[i])) throw ParameterError("SparseSignal: support value must be finite and nonzero");
  }
}

SparseSignal gen_sparse_signal(std::size_t n, std::size_t k, Rng& rng) {
  if (k < 1 || k > n) {
    throw ParameterError("gen_sparse_signal: need 1 <= k <= n, got k=" + std::to_string(k) +
                         " n=" + std::to_string(n));
  }
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
  }

  SparseSignal s;
  s.dimension = n;
  s.support.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(s.support.begin(), s.support.end());
  s.values.resize(k);
  for (double& v : s.values) {
    do {
      v = rng.normal();
    } while (v == 0.0);
  }
  return s;
}

double relative_error(std::span<const double> x, const SparseSignal& truth) {
  if (x.size() != truth.dimension) {
    throw DimensionError("relative_error: iterate length " + std::to_string(x.size()) +
                         " vs signal dimension " + std::to_string(truth.dimension));
  }
  const double denom = truth.norm();
  if (denom == 0.0) throw ParameterError("relative_error: ground truth is zero");
  double num = 0.0;
  std::size_t next = 0;
  for (std::size_t l = 0; l < x.size(); ++l) {
    double d = x[l];
    if (next < truth.support.size() && truth.support[next] == l) d -= truth.values[next++];
    num += d * d;
  }
  return std::sqrt(num) / denom;
}

}  // namespace kaczmarz
