#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace arnli {

// Sorted-index sparse vector of fixed dimension.
struct SparseVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  std::size_t dim = 0;

  std::size_t nnz() const { return indices.size(); }
  double squared_norm() const;
  double dot(std::span<const double> dense) const;
  std::vector<double> to_dense() const;

  // Keeps only non-zero entries of `dense`.
  static SparseVector from_dense(std::span<const double> dense);
  // Appends `other` with its indices shifted by this->dim.
  void append(const SparseVector& other);

  bool operator==(const SparseVector&) const = default;
};

// Row-major (CSR) matrix of feature vectors.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  explicit FeatureMatrix(std::size_t cols) : cols_(cols) {}

  // Throws Error when the row dimension differs from cols().
  void add_row(const SparseVector& row);

  std::size_t rows() const { return row_ptr_.size() - 1; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return col_idx_.size(); }

  std::span<const std::uint32_t> row_indices(std::size_t r) const {
    return {col_idx_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }
  std::span<const double> row_values(std::size_t r) const {
    return {vals_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }
  SparseVector row(std::size_t r) const;

  // Binary search within row r.
  double at(std::size_t r, std::size_t c) const;
  double row_squared_norm(std::size_t r) const;

  // Every entry multiplied by `factor`.
  FeatureMatrix scaled(double factor) const;

  bool operator==(const FeatureMatrix&) const = default;

 private:
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> col_idx_;
  std::vector<double> vals_;
};

// Column-major (CSC) copy used by tree learners.
struct ColumnIndex {
  std::vector<std::size_t> col_ptr;
  std::vector<std::uint32_t> row_idx;
  std::vector<double> vals;

  explicit ColumnIndex(const FeatureMatrix& m);
  std::size_t column_nnz(std::size_t c) const { return col_ptr[c + 1] - col_ptr[c]; }
};

}  // namespace arnli
