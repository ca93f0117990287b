#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "kaczmarz/linalg.hpp"

namespace kaczmarz {

/// xoshiro256** seeded through splitmix64.
///
/// The stream of draws is a pure function of (seed, stream), independent of
/// platform and standard library. Distinct `stream` values give statistically
/// independent generators for the same seed, which is how the experiment
/// harness separates problem generation from row sampling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  std::uint64_t next() noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Standard normal draw (Box-Muller, second variate cached).
  double normal() noexcept;

  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  std::array<std::uint64_t, 4> s_{};
  std::uint64_t seed_;
  std::uint64_t stream_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Well-known stream ids.
inline constexpr std::uint64_t kSolverStream = 0;
inline constexpr std::uint64_t kProblemStream = 1;
inline constexpr std::uint64_t kSharedMatrixStream = 2;

/// m x n matrix of i.i.d. standard normal entries, filled row by row.
DenseMatrix gaussian_matrix(std::size_t m, std::size_t n, Rng& rng);

}  // namespace kaczmarz
