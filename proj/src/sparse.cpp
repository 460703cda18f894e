#include "arnli/sparse.hpp"

#include <algorithm>

#include "arnli/errors.hpp"

namespace arnli {

double SparseVector::squared_norm() const {
  double s = 0;
  for (double v : values) s += v * v;
  return s;
}

double SparseVector::dot(std::span<const double> dense) const {
  double s = 0;
  for (std::size_t k = 0; k < indices.size(); ++k) s += values[k] * dense[indices[k]];
  return s;
}

std::vector<double> SparseVector::to_dense() const {
  std::vector<double> d(dim, 0.0);
  for (std::size_t k = 0; k < indices.size(); ++k) d[indices[k]] = values[k];
  return d;
}

SparseVector SparseVector::from_dense(std::span<const double> dense) {
  SparseVector v;
  v.dim = dense.size();
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) {
      v.indices.push_back(static_cast<std::uint32_t>(i));
      v.values.push_back(dense[i]);
    }
  }
  return v;
}

void SparseVector::append(const SparseVector& other) {
  for (std::size_t k = 0; k < other.indices.size(); ++k) {
    indices.push_back(static_cast<std::uint32_t>(dim + other.indices[k]));
    values.push_back(other.values[k]);
  }
  dim += other.dim;
}

void FeatureMatrix::add_row(const SparseVector& row) {
  if (row.dim != cols_) {
    throw Error("feature dimension mismatch: expected " + std::to_string(cols_) + ", got " +
                std::to_string(row.dim));
  }
  col_idx_.insert(col_idx_.end(), row.indices.begin(), row.indices.end());
  vals_.insert(vals_.end(), row.values.begin(), row.values.end());
  row_ptr_.push_back(col_idx_.size());
}

SparseVector FeatureMatrix::row(std::size_t r) const {
  SparseVector v;
  v.dim = cols_;
  auto idx = row_indices(r);
  auto val = row_values(r);
  v.indices.assign(idx.begin(), idx.end());
  v.values.assign(val.begin(), val.end());
  return v;
}

double FeatureMatrix::at(std::size_t r, std::size_t c) const {
  auto idx = row_indices(r);
  auto it = std::lower_bound(idx.begin(), idx.end(), static_cast<std::uint32_t>(c));
  if (it == idx.end() || *it != c) return 0.0;
  return vals_[row_ptr_[r] + static_cast<std::size_t>(it - idx.begin())];
}

double FeatureMatrix::row_squared_norm(std::size_t r) const {
  double s = 0;
  for (double v : row_values(r)) s += v * v;
  return s;
}

FeatureMatrix FeatureMatrix::scaled(double factor) const {
  FeatureMatrix m = *this;
  for (double& v : m.vals_) v *= factor;
  return m;
}

ColumnIndex::ColumnIndex(const FeatureMatrix& m) : col_ptr(m.cols() + 1, 0) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (auto c : m.row_indices(r)) ++col_ptr[c + 1];
  }
  for (std::size_t c = 0; c < m.cols(); ++c) col_ptr[c + 1] += col_ptr[c];
  row_idx.resize(m.nnz());
  vals.resize(m.nnz());
  std::vector<std::size_t> fill(col_ptr.begin(), col_ptr.end() - 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto idx = m.row_indices(r);
    auto val = m.row_values(r);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const std::size_t pos = fill[idx[k]]++;
      row_idx[pos] = static_cast<std::uint32_t>(r);
      vals[pos] = val[k];
    }
  }
}

}  // namespace arnli
