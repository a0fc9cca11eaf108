#include "gradval/extended_int.hpp"

#include <charconv>
#include <stdexcept>

namespace gradval {

std::int64_t ExtInt::value() const {
  if (!is_finite()) throw std::logic_error("ExtInt::value on an infinite bound");
  return value_;
}

std::optional<ExtInt> ExtInt::parse(const std::string& text) {
  if (text == "-inf") return neg_inf();
  if (text == "+inf" || text == "inf") return pos_inf();
  std::int64_t v = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) return std::nullopt;
  return ExtInt(v);
}

std::string ExtInt::to_string() const {
  switch (kind_) {
    case Kind::NegInf: return "-inf";
    case Kind::PosInf: return "+inf";
    case Kind::Finite: break;
  }
  return std::to_string(value_);
}

std::optional<ExtInt> product_bound(const ExtInt& a, const ExtInt& b) {
  if (a.is_pos_inf() || b.is_pos_inf()) return std::nullopt;
  if (a.is_neg_inf() || b.is_neg_inf()) return ExtInt::neg_inf();
  return ExtInt(a.value() + b.value());
}

ExtInt operator+(const ExtInt& a, std::int64_t shift) {
  if (!a.is_finite()) return a;
  return ExtInt(a.value() + shift);
}

ExtInt negate(const ExtInt& a) {
  if (a.is_neg_inf()) return ExtInt::pos_inf();
  if (a.is_pos_inf()) return ExtInt::neg_inf();
  return ExtInt(-a.value());
}

}  // namespace gradval
