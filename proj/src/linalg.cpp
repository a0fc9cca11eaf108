#include "gradval/linalg.hpp"

namespace gradval::linalg {

std::optional<Vector> solve(const Matrix& a, const Vector& b, const FieldDescriptor& field) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a.front().size();
  Matrix m = a;
  for (std::size_t r = 0; r < rows; ++r) m[r].push_back(b[r]);

  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && m[pivot][c].is_zero()) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[pivot], m[rank]);
    Scalar inv = m[rank][c].inverse();
    for (auto& x : m[rank]) x = x * inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || m[r][c].is_zero()) continue;
      Scalar f = m[r][c];
      for (std::size_t k = c; k <= cols; ++k) m[r][k] = m[r][k] - f * m[rank][k];
    }
    pivot_cols.push_back(c);
    ++rank;
  }
  for (std::size_t r = rank; r < rows; ++r) {
    if (!m[r][cols].is_zero()) return std::nullopt;
  }
  Vector x(cols, Scalar::zero(field));
  for (std::size_t r = 0; r < rank; ++r) x[pivot_cols[r]] = m[r][cols];
  return x;
}

void Span::reduce(Vector& v) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const std::size_t p = pivots_[i];
    if (v[p].is_zero()) continue;
    Scalar f = v[p];
    for (std::size_t k = 0; k < dim_; ++k) {
      if (!rows_[i][k].is_zero()) v[k] = v[k] - f * rows_[i][k];
    }
  }
}

bool Span::add(Vector v) {
  reduce(v);
  std::size_t p = 0;
  while (p < dim_ && v[p].is_zero()) ++p;
  if (p == dim_) return false;
  Scalar inv = v[p].inverse();
  for (auto& x : v) x = x * inv;
  // Keep the stored rows fully reduced with respect to the new pivot.
  for (auto& row : rows_) {
    if (row[p].is_zero()) continue;
    Scalar f = row[p];
    for (std::size_t k = 0; k < dim_; ++k) row[k] = row[k] - f * v[k];
  }
  rows_.push_back(std::move(v));
  pivots_.push_back(p);
  return true;
}

bool Span::contains(Vector v) const {
  reduce(v);
  for (const auto& x : v) {
    if (!x.is_zero()) return false;
  }
  return true;
}

}  // namespace gradval::linalg
