#pragma once

#include <optional>
#include <vector>

#include "gradval/scalar.hpp"

namespace gradval::linalg {

using Vector = std::vector<Scalar>;
/// Row-major; every row has the same length.
using Matrix = std::vector<Vector>;

/// Solves A x = b over the field of the entries by Gaussian elimination.
/// Returns one solution, or nullopt when the system is inconsistent.
std::optional<Vector> solve(const Matrix& a, const Vector& b, const FieldDescriptor& field);

/// Incrementally maintained subspace of field^dim in reduced echelon form.
class Span {
 public:
  Span(const FieldDescriptor& field, std::size_t dim) : field_(field), dim_(dim) {}

  /// Adds a vector; returns true when it enlarged the span.
  bool add(Vector v);
  bool contains(Vector v) const;
  std::size_t dimension() const { return rows_.size(); }

 private:
  // Reduces v against the stored rows in place.
  void reduce(Vector& v) const;

  FieldDescriptor field_;
  std::size_t dim_;
  std::vector<Vector> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace gradval::linalg
