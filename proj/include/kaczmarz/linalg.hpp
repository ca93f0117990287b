#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace kaczmarz {

using Vector = std::vector<double>;

/// Dense real matrix stored row-major so that a row is one contiguous span.
class DenseMatrix {
 public:
  DenseMatrix() = default;

  /// Zero matrix of the given shape.
  DenseMatrix(std::size_t rows, std::size_t cols);

  /// Takes ownership of row-major `entries`; throws DimensionError on a size
  /// mismatch and ParameterError on a non-finite entry.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {entries_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) noexcept { return {entries_.data() + i * cols_, cols_}; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return entries_[i * cols_ + j]; }

  std::span<const double> entries() const noexcept { return entries_; }

  /// Column-restricted copy A_S; `columns` are 0-based and must be in range.
  DenseMatrix select_columns(std::span<const std::size_t> columns) const;

  DenseMatrix transpose() const;

  /// A x
  Vector multiply(std::span<const double> x) const;

  double frobenius_norm_sq() const noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

double dot(std::span<const double> u, std::span<const double> v);

Vector hadamard(std::span<const double> u, std::span<const double> v);

double norm2_sq(std::span<const double> u) noexcept;

double norm2(std::span<const double> u) noexcept;

}  // namespace kaczmarz
