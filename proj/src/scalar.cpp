#include "gradval/scalar.hpp"

#include <cctype>
#include <sstream>

#include "gradval/error.hpp"

namespace gradval {

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

bool is_perfect_square(std::int64_t n) {
  if (n < 0) return false;
  mpz_class z(static_cast<long>(n));
  return mpz_perfect_square_p(z.get_mpz_t()) != 0;
}

FieldDescriptor FieldDescriptor::rationals() { return {}; }

FieldDescriptor FieldDescriptor::padic_rationals(std::int64_t p) {
  FieldDescriptor d;
  d.valuation = ValuationKind::PAdic;
  d.valuation_prime = p;
  return d;
}

FieldDescriptor FieldDescriptor::quadratic(std::int64_t a) {
  FieldDescriptor d;
  d.kind = FieldKind::Quadratic;
  d.radicand = a;
  return d;
}

FieldDescriptor FieldDescriptor::prime_field(std::int64_t p) {
  FieldDescriptor d;
  d.kind = FieldKind::Prime;
  d.characteristic = p;
  return d;
}

void FieldDescriptor::validate() const {
  if (kind == FieldKind::Quadratic) {
    if (radicand == 0 || is_perfect_square(radicand)) {
      throw Error(ErrorCode::InvalidDescriptor,
                  "quadratic radicand " + std::to_string(radicand) + " is a perfect square or zero");
    }
  }
  if (kind == FieldKind::Prime && !is_prime(characteristic)) {
    throw Error(ErrorCode::InvalidDescriptor,
                "prime field characteristic " + std::to_string(characteristic) + " is not prime");
  }
  if (valuation == ValuationKind::PAdic) {
    if (kind != FieldKind::Rationals) {
      throw Error(ErrorCode::InvalidDescriptor, "p-adic valuations are only supported on Q");
    }
    if (!is_prime(valuation_prime)) {
      throw Error(ErrorCode::InvalidDescriptor,
                  "valuation prime " + std::to_string(valuation_prime) + " is not prime");
    }
  }
}

FieldDescriptor FieldDescriptor::residue_field() const {
  if (valuation == ValuationKind::PAdic) return prime_field(valuation_prime);
  return *this;
}

FieldDescriptor FieldDescriptor::base_field() const {
  if (kind == FieldKind::Prime) return prime_field(characteristic);
  return rationals();
}

std::string FieldDescriptor::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case FieldKind::Rationals: os << "Q"; break;
    case FieldKind::Quadratic: os << "Q(sqrt(" << radicand << "))"; break;
    case FieldKind::Prime: os << "F_" << characteristic; break;
  }
  if (valuation == ValuationKind::PAdic) os << " with " << valuation_prime << "-adic valuation";
  return os.str();
}

namespace {

void require_same_field(const Scalar& a, const Scalar& b) {
  if (!(a.field() == b.field())) {
    throw Error(ErrorCode::DescriptorMismatch,
                a.field().to_string() + " vs " + b.field().to_string());
  }
}

mpz_class reduce_mod(const mpz_class& n, std::int64_t p) {
  mpz_class m(static_cast<long>(p));
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
  return r;
}

// q = n/d reduced to a residue mod p; d must be coprime to p.
mpz_class rational_mod(const mpq_class& q, std::int64_t p) {
  mpz_class m(static_cast<long>(p));
  mpz_class inv;
  mpz_class den = reduce_mod(q.get_den(), p);
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw Error(ErrorCode::DivisionByZero, "denominator divisible by " + std::to_string(p));
  }
  return reduce_mod(q.get_num() * inv, p);
}

std::int64_t padic_order(const mpz_class& n, std::int64_t p) {
  mpz_class rest;
  mpz_class prime(static_cast<long>(p));
  return static_cast<std::int64_t>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t()));
}

}  // namespace

Scalar::Scalar(const FieldDescriptor& field, const mpq_class& rational)
    : field_(field), x_(rational), y_(0) {
  normalize();
}

Scalar::Scalar(const FieldDescriptor& field, const mpq_class& x, const mpq_class& y)
    : field_(field), x_(x), y_(y) {
  if (field.kind != FieldKind::Quadratic && sgn(y) != 0) {
    throw Error(ErrorCode::DescriptorMismatch, "sqrt part outside a quadratic field");
  }
  normalize();
}

Scalar Scalar::root(const FieldDescriptor& field) {
  return Scalar(field, mpq_class(0), mpq_class(1));
}

void Scalar::normalize() {
  x_.canonicalize();
  y_.canonicalize();
  if (field_.kind == FieldKind::Prime) {
    x_ = mpq_class(rational_mod(x_, field_.characteristic));
  }
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  r.x_ = -x_;
  r.y_ = -y_;
  r.normalize();
  return r;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  switch (field_.kind) {
    case FieldKind::Rationals: return Scalar(field_, 1 / x_);
    case FieldKind::Prime: {
      mpz_class inv;
      mpz_class m(static_cast<long>(field_.characteristic));
      mpz_invert(inv.get_mpz_t(), x_.get_num().get_mpz_t(), m.get_mpz_t());
      return Scalar(field_, mpq_class(inv));
    }
    case FieldKind::Quadratic: {
      mpq_class norm = x_ * x_ - mpq_class(static_cast<long>(field_.radicand)) * y_ * y_;
      return Scalar(field_, x_ / norm, -y_ / norm);
    }
  }
  return *this;
}

std::vector<Scalar> Scalar::coordinates() const {
  FieldDescriptor base = field_.base_field();
  if (field_.kind == FieldKind::Quadratic) return {Scalar(base, x_), Scalar(base, y_)};
  return {Scalar(base, x_)};
}

Scalar Scalar::from_coordinates(const FieldDescriptor& field, const std::vector<Scalar>& coords) {
  if (field.kind == FieldKind::Quadratic) {
    return Scalar(field, coords.at(0).rational_part(), coords.at(1).rational_part());
  }
  return Scalar(field, coords.at(0).rational_part());
}

std::vector<Scalar> Scalar::basis(const FieldDescriptor& field) {
  if (field.kind == FieldKind::Quadratic) return {one(field), root(field)};
  return {one(field)};
}

bool Scalar::operator==(const Scalar& o) const {
  return field_ == o.field_ && x_ == o.x_ && y_ == o.y_;
}

std::string Scalar::to_string() const {
  if (field_.kind != FieldKind::Quadratic || sgn(y_) == 0) return x_.get_str();
  std::string root_term;
  if (y_ == 1) {
    root_term = "sqrt";
  } else if (y_ == -1) {
    root_term = "-sqrt";
  } else {
    root_term = y_.get_str() + "*sqrt";
  }
  if (sgn(x_) == 0) return root_term;
  if (sgn(y_) > 0) return x_.get_str() + "+" + root_term;
  return x_.get_str() + root_term;
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  require_same_field(a, b);
  return Scalar(a.field(), a.rational_part() + b.rational_part(), a.root_part() + b.root_part());
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  require_same_field(a, b);
  return Scalar(a.field(), a.rational_part() - b.rational_part(), a.root_part() - b.root_part());
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  require_same_field(a, b);
  const mpq_class& x1 = a.rational_part();
  const mpq_class& y1 = a.root_part();
  const mpq_class& x2 = b.rational_part();
  const mpq_class& y2 = b.root_part();
  mpq_class r(static_cast<long>(a.field().radicand));
  return Scalar(a.field(), x1 * x2 + r * y1 * y2, x1 * y2 + y1 * x2);
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  require_same_field(a, b);
  return a * b.inverse();
}

Scalar arith(const Scalar& x, const Scalar& y, ArithOp op) {
  switch (op) {
    case ArithOp::Add: return x + y;
    case ArithOp::Sub: return x - y;
    case ArithOp::Mul: return x * y;
    case ArithOp::Div: return x / y;
  }
  return x;
}

ExtInt valuate(const Scalar& x) {
  if (x.is_zero()) return ExtInt::pos_inf();
  const FieldDescriptor& f = x.field();
  if (f.valuation == ValuationKind::Trivial) return ExtInt(0);
  const mpq_class& q = x.rational_part();
  return ExtInt(padic_order(q.get_num(), f.valuation_prime) -
                padic_order(q.get_den(), f.valuation_prime));
}

Scalar residue(const Scalar& x) {
  const FieldDescriptor& f = x.field();
  if (f.valuation == ValuationKind::Trivial) return x;
  ExtInt v = valuate(x);
  if (v < ExtInt(0)) {
    throw Error(ErrorCode::NegativeValue, x.to_string() + " has negative value");
  }
  FieldDescriptor res = f.residue_field();
  if (x.is_zero()) return Scalar::zero(res);
  return Scalar(res, mpq_class(rational_mod(x.rational_part(), f.valuation_prime)));
}

Scalar uniformizer_power(const FieldDescriptor& field, std::int64_t n) {
  if (field.valuation == ValuationKind::Trivial) return Scalar::one(field);
  mpz_class p(static_cast<long>(field.valuation_prime));
  mpz_class pw;
  mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(n < 0 ? -n : n));
  if (n >= 0) return Scalar(field, mpq_class(pw));
  return Scalar(field, mpq_class(mpz_class(1), pw));
}

Scalar times_uniformizer_power(const Scalar& c, std::int64_t n) {
  return c * uniformizer_power(c.field(), n);
}

FieldAutomorphism FieldAutomorphism::compose(const FieldAutomorphism& other) const {
  return kind_ == other.kind_ ? identity() : conjugation();
}

void FieldAutomorphism::check_field(const FieldDescriptor& field) const {
  if (kind_ == Kind::Conjugation && field.kind != FieldKind::Quadratic) {
    throw Error(ErrorCode::DescriptorMismatch, "conjugation requires a quadratic field");
  }
}

std::string FieldAutomorphism::to_string() const {
  return kind_ == Kind::Identity ? "id" : "conj";
}

Scalar apply_automorphism(const FieldAutomorphism& sigma, const Scalar& x) {
  sigma.check_field(x.field());
  if (sigma.is_identity()) return x;
  return Scalar(x.field(), x.rational_part(), -x.root_part());
}

// Grammar: sum := ['+'|'-'] term (('+'|'-') term)*
//          term := rational ['*' 'sqrt'] | 'sqrt'
//          rational := digits ['/' digits]
Scalar Scalar::parse(const FieldDescriptor& field, const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  auto fail = [&](const std::string& why) -> Error {
    return Error(ErrorCode::ParseError, "scalar '" + text + "': " + why);
  };
  if (s.empty()) throw fail("empty");
  std::size_t i = 0;
  auto read_digits = [&]() -> std::string {
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    return s.substr(start, i - start);
  };
  mpq_class x(0), y(0);
  bool first = true;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (!first) {
      throw fail("expected '+' or '-' at position " + std::to_string(i));
    }
    first = false;
    mpq_class coeff(1);
    bool has_number = false;
    std::string num = read_digits();
    if (!num.empty()) {
      has_number = true;
      mpz_class n(num);
      mpz_class d(1);
      if (i < s.size() && s[i] == '/') {
        ++i;
        std::string den = read_digits();
        if (den.empty()) throw fail("missing denominator");
        d = mpz_class(den);
        if (d == 0) throw fail("zero denominator");
      }
      coeff = mpq_class(n, d);
      coeff.canonicalize();
    }
    bool is_root = false;
    if (i < s.size() && s[i] == '*') {
      if (!has_number) throw fail("dangling '*'");
      ++i;
      if (s.compare(i, 4, "sqrt") != 0) throw fail("expected 'sqrt' after '*'");
      i += 4;
      is_root = true;
    } else if (s.compare(i, 4, "sqrt") == 0) {
      if (has_number) throw fail("missing '*' before sqrt");
      i += 4;
      is_root = true;
    }
    if (!has_number && !is_root) throw fail("expected a number or 'sqrt'");
    if (is_root) {
      if (field.kind != FieldKind::Quadratic) throw fail("sqrt outside a quadratic field");
      y += sign * coeff;
    } else {
      x += sign * coeff;
    }
  }
  return Scalar(field, x, y);
}

}  // namespace gradval
