#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gradval/groupoid.hpp"
#include "gradval/linalg.hpp"
#include "gradval/scalar.hpp"

namespace gradval {

using Index = Groupoid::Index;

/// Twisting data (alpha, sigma) for a crossed-product groupoid ring
/// k[G, alpha, sigma]. Starts out trivial: alpha = 1 on composable pairs,
/// sigma = id everywhere.
class Twist {
 public:
  Twist(const Groupoid& g, const FieldDescriptor& field);

  /// Throws InvalidTwist for a zero value.
  void set_alpha(Index f, Index g, const Scalar& value);
  void clear_alpha(Index f, Index g) { alpha_[f * size_ + g].reset(); }
  void set_sigma(Index g, const FieldAutomorphism& sigma);

  const std::optional<Scalar>& alpha(Index f, Index g) const { return alpha_[f * size_ + g]; }
  const FieldAutomorphism& sigma(Index g) const { return sigma_[g]; }
  std::size_t size() const { return size_; }

 private:
  std::size_t size_;
  std::vector<std::optional<Scalar>> alpha_;
  std::vector<FieldAutomorphism> sigma_;
};

struct ConditionResult {
  bool pass = true;
  std::vector<std::string> witnesses;
};

/// Outcome of the four crossed-product conditions, in order:
/// (1) sigma(f) sigma(g) = sigma(fg), (2) the cocycle identity,
/// (3) normalisation on units, (4) alpha defined exactly on composable pairs.
struct TwistReport {
  std::array<ConditionResult, 4> conditions;
  bool all_pass() const {
    for (const auto& c : conditions) {
      if (!c.pass) return false;
    }
    return true;
  }
};

TwistReport validate_twist(const Groupoid& g, const FieldDescriptor& field, const Twist& twist);

/// The G-skewfield Q = k[G, alpha, sigma]; every component Q_g = k u_g.
class GSkewfield {
 public:
  /// Validates the twist and throws InvalidTwist on failure.
  static std::shared_ptr<const GSkewfield> create(FieldDescriptor field, Groupoid groupoid, Twist twist);
  /// Skips twist validation; used to build deliberately broken rings.
  static std::shared_ptr<const GSkewfield> create_unchecked(FieldDescriptor field, Groupoid groupoid,
                                                            Twist twist);

  const FieldDescriptor& field() const { return field_; }
  const Groupoid& groupoid() const { return groupoid_; }
  const Twist& twist() const { return twist_; }
  std::size_t size() const { return groupoid_.size(); }

  /// w(alpha(f, g)) for composable f, g.
  std::int64_t alpha_value(Index f, Index g) const;
  /// Dimension of Q over the prime subfield of k.
  std::size_t base_dimension() const { return size() * static_cast<std::size_t>(field_.degree()); }

 private:
  GSkewfield(FieldDescriptor field, Groupoid groupoid, Twist twist);

  FieldDescriptor field_;
  Groupoid groupoid_;
  Twist twist_;
  std::vector<std::int64_t> alpha_values_;
};

using QPtr = std::shared_ptr<const GSkewfield>;

/// An element sum_g c_g u_g of a G-skewfield. Zero coefficients are never stored.
class GradedElement {
 public:
  explicit GradedElement(QPtr parent) : parent_(std::move(parent)) {}

  static GradedElement zero(const QPtr& q) { return GradedElement(q); }
  static GradedElement one(const QPtr& q);
  static GradedElement unit(const QPtr& q, Index g);
  static GradedElement homogeneous(const QPtr& q, Index g, const Scalar& c);
  /// Sum of 1_e over the given idempotents.
  static GradedElement idempotent_sum(const QPtr& q, const std::vector<Index>& idempotents);
  /// Parses sums such as "3/2*e12 + 1*e21", "-(1+sqrt)*(1,e11)" or "e11".
  static GradedElement parse(const QPtr& q, const std::string& text);

  const QPtr& parent() const { return parent_; }
  const std::map<Index, Scalar>& coefficients() const { return coeffs_; }
  Scalar coefficient(Index g) const;
  void set(Index g, const Scalar& c);

  bool is_zero() const { return coeffs_.empty(); }
  bool is_homogeneous() const { return coeffs_.size() == 1; }
  /// The degree of a nonzero homogeneous element.
  std::optional<Index> degree() const;
  std::vector<Index> support() const;

  /// Coordinates over the prime subfield, ordered by (g, basis index).
  linalg::Vector coordinates() const;
  static GradedElement from_coordinates(const QPtr& q, const linalg::Vector& coords);

  GradedElement operator-() const;
  bool operator==(const GradedElement& o) const;
  bool operator!=(const GradedElement& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  QPtr parent_;
  std::map<Index, Scalar> coeffs_;
};

GradedElement operator+(const GradedElement& x, const GradedElement& y);
GradedElement operator-(const GradedElement& x, const GradedElement& y);
/// (a u_f)(b u_g) = a sigma(f)(b) alpha(f, g) u_{fg}, zero when fg is undefined.
GradedElement operator*(const GradedElement& x, const GradedElement& y);
GradedElement operator*(const Scalar& c, const GradedElement& x);
GradedElement mul(const GradedElement& x, const GradedElement& y);

/// Idempotents e with 1_e x != 0 (source) and x 1_e != 0 (target).
struct SourceTarget {
  std::vector<Index> source;
  std::vector<Index> target;
};
SourceTarget source_target_sets(const GradedElement& x);
/// (s(x), t(x)) as elements.
std::pair<GradedElement, GradedElement> source_target(const GradedElement& x);

/// The G-inverse b with s(x) = xb = t(b) and s(b) = bx = t(x), if it exists.
std::optional<GradedElement> g_inverse(const GradedElement& x);
/// True when b satisfies the four G-inverse identities for x.
bool is_g_inverse(const GradedElement& x, const GradedElement& b);

bool is_g_skewfield(const GSkewfield& q);
bool is_strong(const GSkewfield& q);
/// Some homogeneous element is invertible in the ring sense; holds iff G is a group.
bool has_invertible_homogeneous(const GSkewfield& q);

/// No proper nonzero homogeneous ideals; equivalent to G connected.
bool is_g_simple(const GSkewfield& q);

/// A central idempotent z != 0, 1 whose two-sided ideal is proper, or nullopt.
/// Disconnected G yields the unit of one connected component. Connected G
/// with nontrivial isotropy yields the isotropy average, after checking it
/// really is central, idempotent and proper. Throws CharacteristicObstruction
/// when char k divides the isotropy order.
std::optional<GradedElement> find_nonhomogeneous_ideal_witness(const QPtr& q);

/// The two-sided ideal generated by the given elements, as a subspace of Q
/// over the prime subfield.
linalg::Span two_sided_ideal(const QPtr& q, const std::vector<GradedElement>& generators);

/// True when z commutes with every scalar multiple of every basis element.
bool is_central(const GradedElement& z);

}  // namespace gradval
