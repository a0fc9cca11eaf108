#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace gradval {

/// An element of Z ∪ {-inf, +inf}. Used both for valuation values (v(0) = +inf)
/// and for component bounds of bound patterns.
class ExtInt {
 public:
  enum class Kind : std::uint8_t { NegInf, Finite, PosInf };

  constexpr ExtInt() = default;
  constexpr ExtInt(std::int64_t v) : kind_(Kind::Finite), value_(v) {}  // NOLINT(implicit)

  static constexpr ExtInt neg_inf() { return ExtInt(Kind::NegInf); }
  static constexpr ExtInt pos_inf() { return ExtInt(Kind::PosInf); }

  constexpr bool is_finite() const { return kind_ == Kind::Finite; }
  constexpr bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  constexpr bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  constexpr Kind kind() const { return kind_; }

  /// Finite value; precondition is_finite().
  std::int64_t value() const;

  constexpr std::strong_ordering operator<=>(const ExtInt& o) const {
    if (kind_ != o.kind_) return static_cast<int>(kind_) <=> static_cast<int>(o.kind_);
    if (kind_ != Kind::Finite) return std::strong_ordering::equal;
    return value_ <=> o.value_;
  }
  constexpr bool operator==(const ExtInt& o) const { return (*this <=> o) == 0; }

  /// Parses "-inf", "+inf", "inf" or a decimal integer.
  static std::optional<ExtInt> parse(const std::string& text);
  std::string to_string() const;

 private:
  explicit constexpr ExtInt(Kind k) : kind_(k) {}

  Kind kind_ = Kind::Finite;
  std::int64_t value_ = 0;
};

/// Bound of a component product R_g R_g'. A +inf bound is the zero component,
/// so the product is zero and nullopt is returned; otherwise -inf absorbs.
std::optional<ExtInt> product_bound(const ExtInt& a, const ExtInt& b);

/// Shift by a finite amount; infinities are fixed.
ExtInt operator+(const ExtInt& a, std::int64_t shift);

/// Negation: -(+inf) = -inf.
ExtInt negate(const ExtInt& a);

}  // namespace gradval
