#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "gradval/extended_int.hpp"

namespace gradval {

enum class FieldKind { Rationals, Quadratic, Prime };
enum class ValuationKind { Trivial, PAdic };

/// Coefficient field k together with the valuation w used on it.
///
/// Supported combinations: Q with the trivial or a p-adic valuation, Q(sqrt a)
/// and F_p with the trivial valuation.
struct FieldDescriptor {
  FieldKind kind = FieldKind::Rationals;
  std::int64_t radicand = 0;     // a, for Quadratic
  std::int64_t characteristic = 0;  // p, for Prime
  ValuationKind valuation = ValuationKind::Trivial;
  std::int64_t valuation_prime = 0;  // p, for PAdic

  static FieldDescriptor rationals();
  static FieldDescriptor padic_rationals(std::int64_t p);
  static FieldDescriptor quadratic(std::int64_t a);
  static FieldDescriptor prime_field(std::int64_t p);

  /// Throws InvalidDescriptor when the combination is unsupported or a
  /// parameter is out of range.
  void validate() const;

  bool is_discrete() const { return valuation == ValuationKind::PAdic; }
  /// Residue field of the valuation ring: F_p for PAdic(p), k itself otherwise.
  FieldDescriptor residue_field() const;
  /// Prime subfield over which k is a finite-dimensional vector space.
  FieldDescriptor base_field() const;
  /// Dimension of k over base_field().
  int degree() const { return kind == FieldKind::Quadratic ? 2 : 1; }

  bool operator==(const FieldDescriptor&) const = default;
  std::string to_string() const;
};

bool is_prime(std::int64_t n);
bool is_perfect_square(std::int64_t n);

/// Exact element of a coefficient field, always in canonical form: lowest
/// terms over Q, representative in [0, p) over F_p.
class Scalar {
 public:
  Scalar() = default;
  Scalar(const FieldDescriptor& field, const mpq_class& rational);
  /// x + y*sqrt(a); only valid over a quadratic field.
  Scalar(const FieldDescriptor& field, const mpq_class& x, const mpq_class& y);

  static Scalar zero(const FieldDescriptor& field) { return Scalar(field, mpq_class(0)); }
  static Scalar one(const FieldDescriptor& field) { return Scalar(field, mpq_class(1)); }
  static Scalar integer(const FieldDescriptor& field, std::int64_t n) {
    return Scalar(field, mpq_class(static_cast<long>(n)));
  }
  /// sqrt(a) in a quadratic field.
  static Scalar root(const FieldDescriptor& field);

  /// Parses "3/4", "-5", "1+2*sqrt", "-1/2*sqrt". Prime-field literals are
  /// reduced mod p. Throws ParseError.
  static Scalar parse(const FieldDescriptor& field, const std::string& text);

  const FieldDescriptor& field() const { return field_; }
  const mpq_class& rational_part() const { return x_; }
  const mpq_class& root_part() const { return y_; }

  bool is_zero() const { return sgn(x_) == 0 && sgn(y_) == 0; }
  bool is_one() const { return x_ == 1 && sgn(y_) == 0; }

  Scalar operator-() const;
  Scalar inverse() const;

  /// Coordinates over field().base_field() in the basis (1, sqrt a).
  std::vector<Scalar> coordinates() const;
  static Scalar from_coordinates(const FieldDescriptor& field, const std::vector<Scalar>& coords);
  /// Basis of k over its prime subfield.
  static std::vector<Scalar> basis(const FieldDescriptor& field);

  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  void normalize();

  FieldDescriptor field_;
  mpq_class x_;
  mpq_class y_;
};

Scalar operator+(const Scalar& a, const Scalar& b);
Scalar operator-(const Scalar& a, const Scalar& b);
Scalar operator*(const Scalar& a, const Scalar& b);
Scalar operator/(const Scalar& a, const Scalar& b);

enum class ArithOp { Add, Sub, Mul, Div };
Scalar arith(const Scalar& x, const Scalar& y, ArithOp op);

/// w(x); +inf for x = 0.
ExtInt valuate(const Scalar& x);

/// Image of x in the residue field. For PAdic(p), requires w(x) >= 0 and maps
/// x to x mod p. Throws NegativeValue otherwise.
Scalar residue(const Scalar& x);

/// c * p^n for PAdic(p); c itself for trivial valuations (n is ignored there).
Scalar times_uniformizer_power(const Scalar& c, std::int64_t n);
/// p^n as a scalar, or 1 under the trivial valuation.
Scalar uniformizer_power(const FieldDescriptor& field, std::int64_t n);

class FieldAutomorphism {
 public:
  enum class Kind { Identity, Conjugation };

  FieldAutomorphism() = default;
  explicit FieldAutomorphism(Kind k) : kind_(k) {}
  static FieldAutomorphism identity() { return FieldAutomorphism(Kind::Identity); }
  static FieldAutomorphism conjugation() { return FieldAutomorphism(Kind::Conjugation); }

  Kind kind() const { return kind_; }
  bool is_identity() const { return kind_ == Kind::Identity; }

  /// Composition (this ∘ other). Both kinds are involutions.
  FieldAutomorphism compose(const FieldAutomorphism& other) const;
  FieldAutomorphism inverse() const { return *this; }

  /// Throws DescriptorMismatch for Conjugation outside quadratic fields.
  void check_field(const FieldDescriptor& field) const;

  bool operator==(const FieldAutomorphism&) const = default;
  std::string to_string() const;

 private:
  Kind kind_ = Kind::Identity;
};

Scalar apply_automorphism(const FieldAutomorphism& sigma, const Scalar& x);

}  // namespace gradval
