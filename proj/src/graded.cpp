#include "gradval/graded.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "gradval/error.hpp"

namespace gradval {

Twist::Twist(const Groupoid& g, const FieldDescriptor& field)
    : size_(g.size()), alpha_(g.size() * g.size()), sigma_(g.size()) {
  for (Index f = 0; f < size_; ++f) {
    for (Index h = 0; h < size_; ++h) {
      if (g.composable(f, h)) alpha_[f * size_ + h] = Scalar::one(field);
    }
  }
}

void Twist::set_alpha(Index f, Index g, const Scalar& value) {
  if (f >= size_ || g >= size_) throw Error(ErrorCode::UnknownElement, "twist index out of range");
  if (value.is_zero()) throw Error(ErrorCode::InvalidTwist, "twist value must be nonzero");
  alpha_[f * size_ + g] = value;
}

void Twist::set_sigma(Index g, const FieldAutomorphism& sigma) {
  if (g >= size_) throw Error(ErrorCode::UnknownElement, "twist index out of range");
  sigma_[g] = sigma;
}

namespace {

std::string tuple_name(const Groupoid& g, std::initializer_list<Index> xs) {
  std::string out = "(";
  bool first = true;
  for (Index x : xs) {
    if (!first) out += ", ";
    out += g.name(x);
    first = false;
  }
  return out + ")";
}

constexpr std::size_t kMaxWitnesses = 8;

void fail(ConditionResult& c, std::string witness) {
  c.pass = false;
  if (c.witnesses.size() < kMaxWitnesses) c.witnesses.push_back(std::move(witness));
}

}  // namespace

TwistReport validate_twist(const Groupoid& g, const FieldDescriptor& field, const Twist& twist) {
  TwistReport report;
  const std::size_t n = g.size();
  if (twist.size() != n) {
    for (auto& c : report.conditions) fail(c, "twist size does not match groupoid");
    return report;
  }
  auto& c1 = report.conditions[0];
  auto& c2 = report.conditions[1];
  auto& c3 = report.conditions[2];
  auto& c4 = report.conditions[3];

  for (Index f = 0; f < n; ++f) {
    try {
      twist.sigma(f).check_field(field);
    } catch (const Error&) {
      fail(c1, "sigma" + tuple_name(g, {f}) + " is not an automorphism of " + field.to_string());
    }
  }

  for (Index f = 0; f < n; ++f) {
    for (Index h = 0; h < n; ++h) {
      const bool defined = g.mult(f, h).has_value();
      const auto& a = twist.alpha(f, h);
      if (defined != a.has_value()) {
        fail(c4, "alpha" + tuple_name(g, {f, h}) + (defined ? " missing" : " defined on a non-composable pair"));
      } else if (a && (a->is_zero() || !(a->field() == field))) {
        fail(c4, "alpha" + tuple_name(g, {f, h}) + " is zero or lies in the wrong field");
      }
      if (defined) {
        Index fh = *g.mult(f, h);
        if (!(twist.sigma(f).compose(twist.sigma(h)) == twist.sigma(fh))) {
          fail(c1, "sigma" + tuple_name(g, {f, h}));
        }
      }
    }
  }
  if (!c4.pass) {
    // Conditions (2) and (3) need alpha on every composable pair.
    return report;
  }

  const Scalar one = Scalar::one(field);
  for (Index f = 0; f < n; ++f) {
    if (*twist.alpha(f, g.target(f)) != one) fail(c3, "alpha" + tuple_name(g, {f, g.target(f)}) + " != 1");
    if (*twist.alpha(g.source(f), f) != one) fail(c3, "alpha" + tuple_name(g, {g.source(f), f}) + " != 1");
  }

  for (Index f = 0; f < n; ++f) {
    for (Index h = 0; h < n; ++h) {
      auto fh = g.mult(f, h);
      if (!fh) continue;
      for (Index k = 0; k < n; ++k) {
        auto hk = g.mult(h, k);
        if (!hk) continue;
        Scalar lhs = *twist.alpha(f, h) * *twist.alpha(*fh, k);
        Scalar rhs = apply_automorphism(twist.sigma(f), *twist.alpha(h, k)) * *twist.alpha(f, *hk);
        if (lhs != rhs) fail(c2, tuple_name(g, {f, h, k}));
      }
    }
  }
  return report;
}

GSkewfield::GSkewfield(FieldDescriptor field, Groupoid groupoid, Twist twist)
    : field_(std::move(field)), groupoid_(std::move(groupoid)), twist_(std::move(twist)) {
  const std::size_t n = groupoid_.size();
  alpha_values_.assign(n * n, 0);
  for (Index f = 0; f < n; ++f) {
    for (Index h = 0; h < n; ++h) {
      const auto& a = twist_.alpha(f, h);
      if (a && !a->is_zero()) alpha_values_[f * n + h] = valuate(*a).value();
    }
  }
}

QPtr GSkewfield::create(FieldDescriptor field, Groupoid groupoid, Twist twist) {
  field.validate();
  TwistReport report = validate_twist(groupoid, field, twist);
  for (std::size_t i = 0; i < report.conditions.size(); ++i) {
    const auto& c = report.conditions[i];
    if (!c.pass) {
      std::string msg = "twist condition (" + std::to_string(i + 1) + ") fails";
      if (!c.witnesses.empty()) msg += " at " + c.witnesses.front();
      throw Error(ErrorCode::InvalidTwist, msg);
    }
  }
  return create_unchecked(std::move(field), std::move(groupoid), std::move(twist));
}

QPtr GSkewfield::create_unchecked(FieldDescriptor field, Groupoid groupoid, Twist twist) {
  if (twist.size() != groupoid.size()) throw Error(ErrorCode::InvalidTwist, "twist size does not match groupoid");
  return QPtr(new GSkewfield(std::move(field), std::move(groupoid), std::move(twist)));
}

std::int64_t GSkewfield::alpha_value(Index f, Index g) const { return alpha_values_[f * size() + g]; }

// ---------------------------------------------------------------------------

GradedElement GradedElement::one(const QPtr& q) {
  return idempotent_sum(q, q->groupoid().idempotents());
}

GradedElement GradedElement::unit(const QPtr& q, Index g) {
  return homogeneous(q, g, Scalar::one(q->field()));
}

GradedElement GradedElement::homogeneous(const QPtr& q, Index g, const Scalar& c) {
  GradedElement x(q);
  x.set(g, c);
  return x;
}

GradedElement GradedElement::idempotent_sum(const QPtr& q, const std::vector<Index>& idempotents) {
  GradedElement x(q);
  for (Index e : idempotents) x.set(e, Scalar::one(q->field()));
  return x;
}

Scalar GradedElement::coefficient(Index g) const {
  auto it = coeffs_.find(g);
  return it == coeffs_.end() ? Scalar::zero(parent_->field()) : it->second;
}

void GradedElement::set(Index g, const Scalar& c) {
  if (g >= parent_->size()) throw Error(ErrorCode::UnknownElement, "index " + std::to_string(g));
  if (!(c.field() == parent_->field())) {
    throw Error(ErrorCode::DescriptorMismatch, c.field().to_string() + " vs " + parent_->field().to_string());
  }
  if (c.is_zero()) {
    coeffs_.erase(g);
  } else {
    coeffs_[g] = c;
  }
}

std::optional<Index> GradedElement::degree() const {
  if (coeffs_.size() != 1) return std::nullopt;
  return coeffs_.begin()->first;
}

std::vector<Index> GradedElement::support() const {
  std::vector<Index> out;
  for (const auto& [g, c] : coeffs_) out.push_back(g);
  return out;
}

linalg::Vector GradedElement::coordinates() const {
  const FieldDescriptor base = parent_->field().base_field();
  const int d = parent_->field().degree();
  linalg::Vector v(parent_->size() * d, Scalar::zero(base));
  for (const auto& [g, c] : coeffs_) {
    auto cs = c.coordinates();
    for (int i = 0; i < d; ++i) v[g * d + i] = cs[i];
  }
  return v;
}

GradedElement GradedElement::from_coordinates(const QPtr& q, const linalg::Vector& coords) {
  const int d = q->field().degree();
  GradedElement x(q);
  for (Index g = 0; g < q->size(); ++g) {
    std::vector<Scalar> cs(coords.begin() + g * d, coords.begin() + (g + 1) * d);
    x.set(g, Scalar::from_coordinates(q->field(), cs));
  }
  return x;
}

GradedElement GradedElement::operator-() const {
  GradedElement out(parent_);
  for (const auto& [g, c] : coeffs_) out.coeffs_[g] = -c;
  return out;
}

bool GradedElement::operator==(const GradedElement& o) const {
  return parent_ == o.parent_ && coeffs_ == o.coeffs_;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string strip_parens(std::string s) {
  while (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
    int depth = 0;
    bool wraps = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '(') ++depth;
      if (s[i] == ')') --depth;
      if (depth == 0 && i + 1 < s.size()) {
        wraps = false;
        break;
      }
    }
    if (!wraps) break;
    s = trim(s.substr(1, s.size() - 2));
  }
  return s;
}

// Scalar text as it should appear before "*name": wrapped when it is a sum.
std::string coefficient_text(const Scalar& c) {
  std::string s = c.to_string();
  if (c.field().kind == FieldKind::Quadratic && sgn(c.rational_part()) != 0 && sgn(c.root_part()) != 0) {
    return "(" + s + ")";
  }
  return s;
}

}  // namespace

GradedElement GradedElement::parse(const QPtr& q, const std::string& text) {
  auto fail = [&](const std::string& why) {
    return Error(ErrorCode::ParseError, "element '" + text + "': " + why);
  };
  GradedElement out(q);
  const std::string body = trim(text);
  if (body.empty()) throw fail("empty");
  if (body == "0") return out;

  // Split into signed terms at top-level '+' / '-'.
  std::vector<std::pair<int, std::string>> terms;
  int depth = 0;
  int sign = 1;
  std::string cur;
  auto flush = [&]() {
    std::string t = trim(cur);
    if (!t.empty()) terms.emplace_back(sign, t);
    cur.clear();
  };
  for (char ch : body) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (depth < 0) throw fail("unbalanced parentheses");
    if (depth == 0 && (ch == '+' || ch == '-')) {
      if (trim(cur).empty()) {
        if (ch == '-') sign = -sign;
        continue;
      }
      // A sign right after '*' belongs to the basis part, which never has one.
      if (trim(cur).back() == '*' || trim(cur).back() == '/') throw fail("misplaced sign");
      flush();
      sign = ch == '-' ? -1 : 1;
      continue;
    }
    cur.push_back(ch);
  }
  if (depth != 0) throw fail("unbalanced parentheses");
  if (trim(cur).empty()) throw fail("dangling sign");
  flush();

  for (const auto& [s, term] : terms) {
    depth = 0;
    std::size_t star = std::string::npos;
    for (std::size_t i = 0; i < term.size(); ++i) {
      if (term[i] == '(') ++depth;
      if (term[i] == ')') --depth;
      if (depth == 0 && term[i] == '*') star = i;
    }
    std::string name;
    Scalar c = Scalar::one(q->field());
    if (star == std::string::npos) {
      name = term;
    } else {
      name = trim(term.substr(star + 1));
      std::string coeff = strip_parens(trim(term.substr(0, star)));
      if (coeff.empty()) throw fail("missing coefficient");
      c = Scalar::parse(q->field(), coeff);
    }
    auto g = q->groupoid().find(name);
    if (!g) {
      throw Error(ErrorCode::UnknownElement, "'" + name + "' in element '" + text + "'");
    }
    if (s < 0) c = -c;
    out.set(*g, out.coefficient(*g) + c);
  }
  return out;
}

std::string GradedElement::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [g, c] : coeffs_) {
    std::string ct = coefficient_text(c);
    const bool negative = ct.front() == '-';
    if (first) {
      out += ct;
    } else if (negative) {
      out += " - " + ct.substr(1);
    } else {
      out += " + " + ct;
    }
    out += "*" + parent_->groupoid().name(g);
    first = false;
  }
  return out;
}

namespace {

void require_same_parent(const GradedElement& x, const GradedElement& y) {
  if (x.parent() != y.parent()) throw Error(ErrorCode::ParentMismatch, "elements of different G-skewfields");
}

}  // namespace

GradedElement operator+(const GradedElement& x, const GradedElement& y) {
  require_same_parent(x, y);
  GradedElement out = x;
  for (const auto& [g, c] : y.coefficients()) out.set(g, out.coefficient(g) + c);
  return out;
}

GradedElement operator-(const GradedElement& x, const GradedElement& y) { return x + (-y); }

GradedElement operator*(const GradedElement& x, const GradedElement& y) {
  require_same_parent(x, y);
  const GSkewfield& q = *x.parent();
  const Groupoid& g = q.groupoid();
  const Twist& tw = q.twist();
  std::map<Index, Scalar> acc;
  for (const auto& [f, a] : x.coefficients()) {
    for (const auto& [h, b] : y.coefficients()) {
      auto fh = g.mult(f, h);
      if (!fh) continue;
      const auto& alpha = tw.alpha(f, h);
      if (!alpha) continue;
      Scalar term = a * apply_automorphism(tw.sigma(f), b) * *alpha;
      auto it = acc.find(*fh);
      if (it == acc.end()) {
        acc.emplace(*fh, term);
      } else {
        it->second = it->second + term;
      }
    }
  }
  GradedElement out(x.parent());
  for (const auto& [k, c] : acc) out.set(k, c);
  return out;
}

GradedElement operator*(const Scalar& c, const GradedElement& x) {
  GradedElement out(x.parent());
  for (const auto& [g, a] : x.coefficients()) out.set(g, c * a);
  return out;
}

GradedElement mul(const GradedElement& x, const GradedElement& y) { return x * y; }

SourceTarget source_target_sets(const GradedElement& x) {
  // 1_e x is the part of x with s(g) = e; x 1_e the part with t(g) = e.
  const Groupoid& g = x.parent()->groupoid();
  SourceTarget st;
  for (Index e : g.idempotents()) {
    bool src = false, tgt = false;
    for (const auto& [h, c] : x.coefficients()) {
      src = src || g.source(h) == e;
      tgt = tgt || g.target(h) == e;
    }
    if (src) st.source.push_back(e);
    if (tgt) st.target.push_back(e);
  }
  return st;
}

std::pair<GradedElement, GradedElement> source_target(const GradedElement& x) {
  SourceTarget st = source_target_sets(x);
  return {GradedElement::idempotent_sum(x.parent(), st.source),
          GradedElement::idempotent_sum(x.parent(), st.target)};
}

bool is_g_inverse(const GradedElement& x, const GradedElement& b) {
  auto [sx, tx] = source_target(x);
  auto [sb, tb] = source_target(b);
  return x * b == sx && sx == tb && b * x == tx && tx == sb;
}

std::optional<GradedElement> g_inverse(const GradedElement& x) {
  const QPtr& q = x.parent();
  const Groupoid& g = q->groupoid();
  if (x.is_zero()) return x;

  if (auto d = x.degree()) {
    const Index h = *d;
    const Index hinv = g.inverse(h);
    const auto& alpha = q->twist().alpha(h, hinv);
    if (alpha) {
      Scalar c = x.coefficient(h) * *alpha;
      GradedElement b = GradedElement::homogeneous(q, hinv, apply_automorphism(q->twist().sigma(h).inverse(), c.inverse()));
      if (is_g_inverse(x, b)) return b;
    }
  }

  // General case: solve x b = s(x), b x = t(x) over the prime subfield, with b
  // supported on morphisms running from t(x) back to s(x).
  SourceTarget st = source_target_sets(x);
  auto in = [](const std::vector<Index>& v, Index e) { return std::find(v.begin(), v.end(), e) != v.end(); };
  std::vector<Index> allowed;
  for (Index h = 0; h < g.size(); ++h) {
    if (in(st.target, g.source(h)) && in(st.source, g.target(h))) allowed.push_back(h);
  }
  const FieldDescriptor& field = q->field();
  const FieldDescriptor base = field.base_field();
  const auto basis = Scalar::basis(field);
  const std::size_t dim = q->base_dimension();

  auto [sx, tx] = source_target(x);
  linalg::Vector rhs = sx.coordinates();
  auto rt = tx.coordinates();
  rhs.insert(rhs.end(), rt.begin(), rt.end());

  linalg::Matrix a(2 * dim, linalg::Vector(allowed.size() * basis.size(), Scalar::zero(base)));
  std::size_t col = 0;
  for (Index h : allowed) {
    for (const auto& beta : basis) {
      GradedElement unknown = GradedElement::homogeneous(q, h, beta);
      auto left = (x * unknown).coordinates();
      auto right = (unknown * x).coordinates();
      for (std::size_t r = 0; r < dim; ++r) {
        a[r][col] = left[r];
        a[dim + r][col] = right[r];
      }
      ++col;
    }
  }
  auto sol = linalg::solve(a, rhs, base);
  if (!sol) return std::nullopt;
  GradedElement b(q);
  col = 0;
  for (Index h : allowed) {
    std::vector<Scalar> cs(sol->begin() + col, sol->begin() + col + basis.size());
    b.set(h, Scalar::from_coordinates(field, cs));
    col += basis.size();
  }
  if (!is_g_inverse(x, b)) return std::nullopt;
  return b;
}

bool is_g_skewfield(const GSkewfield& q) {
  if (!validate_twist(q.groupoid(), q.field(), q.twist()).all_pass()) return false;
  // Every c u_g is then G-invertible; confirm on the basis.
  auto shared = QPtr(std::shared_ptr<const GSkewfield>{}, &q);
  for (Index g = 0; g < q.size(); ++g) {
    if (!g_inverse(GradedElement::unit(shared, g))) return false;
  }
  return true;
}

bool is_strong(const GSkewfield& q) {
  const Groupoid& g = q.groupoid();
  for (Index f = 0; f < q.size(); ++f) {
    for (Index h = 0; h < q.size(); ++h) {
      if (!g.mult(f, h)) continue;
      const auto& a = q.twist().alpha(f, h);
      if (!a || a->is_zero()) return false;
    }
  }
  return true;
}

bool has_invertible_homogeneous(const GSkewfield& q) {
  auto shared = QPtr(std::shared_ptr<const GSkewfield>{}, &q);
  const GradedElement one = GradedElement::one(shared);
  for (Index g = 0; g < q.size(); ++g) {
    GradedElement u = GradedElement::unit(shared, g);
    auto b = g_inverse(u);
    if (b && u * *b == one && *b * u == one) return true;
  }
  return false;
}

bool is_g_simple(const GSkewfield& q) { return connected_components(q.groupoid()).classes.size() == 1; }

linalg::Span two_sided_ideal(const QPtr& q, const std::vector<GradedElement>& generators) {
  const auto basis = Scalar::basis(q->field());
  linalg::Span span(q->field().base_field(), q->base_dimension());
  std::vector<GradedElement> units;
  for (Index g = 0; g < q->size(); ++g) {
    for (const auto& beta : basis) units.push_back(GradedElement::homogeneous(q, g, beta));
  }
  for (const auto& x : generators) {
    for (const auto& l : units) {
      GradedElement lx = l * x;
      if (lx.is_zero()) continue;
      for (const auto& r : units) span.add((lx * r).coordinates());
    }
  }
  return span;
}

bool is_central(const GradedElement& z) {
  const QPtr& q = z.parent();
  for (Index g = 0; g < q->size(); ++g) {
    for (const auto& beta : Scalar::basis(q->field())) {
      GradedElement u = GradedElement::homogeneous(q, g, beta);
      if (z * u != u * z) return false;
    }
  }
  return true;
}

std::optional<GradedElement> find_nonhomogeneous_ideal_witness(const QPtr& q) {
  const Groupoid& g = q->groupoid();
  ConnectedPartition parts = connected_components(g);
  if (parts.classes.size() > 1) {
    std::vector<Index> es;
    for (Index h : parts.classes.front()) {
      if (g.is_idempotent(h)) es.push_back(h);
    }
    return GradedElement::idempotent_sum(q, es);
  }

  const Index e0 = g.idempotents().front();
  const std::size_t order = g.isotropy(e0).size();
  if (order == 1) return std::nullopt;
  const std::int64_t p = q->field().kind == FieldKind::Prime ? q->field().characteristic : 0;
  if (p != 0 && static_cast<std::int64_t>(order) % p == 0) {
    throw Error(ErrorCode::CharacteristicObstruction,
                "characteristic " + std::to_string(p) + " divides the isotropy order " + std::to_string(order));
  }

  Scalar weight = Scalar::integer(q->field(), static_cast<std::int64_t>(order)).inverse();
  GradedElement z(q);
  for (Index e : g.idempotents()) {
    for (Index h : g.isotropy(e)) z.set(h, weight);
  }
  if (!is_central(z) || z * z != z) return std::nullopt;
  const GradedElement one = GradedElement::one(q);
  if (z == one) return std::nullopt;
  linalg::Span ideal = two_sided_ideal(q, {z});
  if (ideal.contains(one.coordinates()) || ideal.contains((one - z).coordinates())) return std::nullopt;
  return z;
}

}  // namespace gradval
