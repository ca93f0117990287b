#include "kaczmarz/linalg.hpp"

#include <cmath>
#include <string>

#include "kaczmarz/errors.hpp"

namespace kaczmarz {

namespace {

void require_same_length(std::span<const double> u, std::span<const double> v, const char* op) {
  if (u.size() != v.size()) {
    throw DimensionError(std::string(op) + ": length mismatch (" + std::to_string(u.size()) +
                         " vs " + std::to_string(v.size()) + ")");
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw DimensionError("DenseMatrix: expected " + std::to_string(rows_ * cols_) +
                         " entries, got " + std::to_string(entries_.size()));
  }
  for (double v : entries_) {
    if (!std::isfinite(v)) throw ParameterError("DenseMatrix: non-finite entry");
  }
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t m = rows.size();
  const std::size_t n = m == 0 ? 0 : rows.begin()->size();
  std::vector<double> entries;
  entries.reserve(m * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw DimensionError("DenseMatrix::from_rows: ragged rows");
    entries.insert(entries.end(), r.begin(), r.end());
  }
  return DenseMatrix(m, n, std::move(entries));
}

DenseMatrix DenseMatrix::select_columns(std::span<const std::size_t> columns) const {
  DenseMatrix out(rows_, columns.size());
  for (std::size_t c : columns) {
    if (c >= cols_) throw DimensionError("select_columns: column " + std::to_string(c) + " out of range");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    auto src = row(i);
    auto dst = out.row(i);
    for (std::size_t k = 0; k < columns.size(); ++k) dst[k] = src[columns[k]];
  }
  return out;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Vector DenseMatrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) {
    throw DimensionError("multiply: vector length " + std::to_string(x.size()) + " vs " +
                         std::to_string(cols_) + " columns");
  }
  Vector y(rows_);
  for (std::size_t i = 0; i < rows_; ++i) y[i] = dot(row(i), x);
  return y;
}

double DenseMatrix::frobenius_norm_sq() const noexcept { return norm2_sq(entries_); }

double dot(std::span<const double> u, std::span<const double> v) {
  require_same_length(u, v, "dot");
  double s = 0.0;
  for (std::size_t l = 0; l < u.size(); ++l) s += u[l] * v[l];
  return s;
}

Vector hadamard(std::span<const double> u, std::span<const double> v) {
  require_same_length(u, v, "hadamard");
  Vector out(u.size());
  for (std::size_t l = 0; l < u.size(); ++l) out[l] = u[l] * v[l];
  return out;
}

double norm2_sq(std::span<const double> u) noexcept {
  double s = 0.0;
  for (double v : u) s += v * v;
  return s;
}

double norm2(std::span<const double> u) noexcept { return std::sqrt(norm2_sq(u)); }

}  // namespace kaczmarz
