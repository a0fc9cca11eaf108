#include "gradval/pattern.hpp"

#include <algorithm>
#include <stdexcept>

#include "gradval/error.hpp"

namespace gradval {

std::string to_string(PatternKind kind) {
  switch (kind) {
    case PatternKind::Subring: return "subring";
    case PatternKind::LeftIdeal: return "left";
    case PatternKind::RightIdeal: return "right";
    case PatternKind::TwoSidedIdeal: return "two-sided";
  }
  return "?";
}

std::string to_string(Side side) {
  switch (side) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::TwoSided: return "two-sided";
  }
  return "?";
}

std::string to_string(Relation r) {
  switch (r) {
    case Relation::Equal: return "=";
    case Relation::Less: return "<=";
    case Relation::Greater: return ">=";
    case Relation::Incomparable: return "incomparable";
  }
  return "?";
}

ExtInt canonical_bound(const FieldDescriptor& field, const ExtInt& b) {
  if (field.is_discrete()) return b;
  if (b.is_pos_inf() || (b.is_finite() && b.value() >= 1)) return ExtInt::pos_inf();
  return ExtInt(0);
}

ExtInt successor_bound(const FieldDescriptor& field, const ExtInt& b) {
  if (!b.is_finite() || !field.is_discrete()) return ExtInt::pos_inf();
  return ExtInt(b.value() + 1);
}

namespace {

PatternKind kind_for(Side side) {
  switch (side) {
    case Side::Left: return PatternKind::LeftIdeal;
    case Side::Right: return PatternKind::RightIdeal;
    case Side::TwoSided: return PatternKind::TwoSidedIdeal;
  }
  return PatternKind::TwoSidedIdeal;
}

bool has_left(PatternKind k) { return k == PatternKind::LeftIdeal || k == PatternKind::TwoSidedIdeal; }
bool has_right(PatternKind k) { return k == PatternKind::RightIdeal || k == PatternKind::TwoSidedIdeal; }

// Bound of the product component R_g(a) R_h(b) inside degree gh, or nullopt
// when one factor is the zero component.
std::optional<ExtInt> product_component(const GSkewfield& q, Index g, Index h, const ExtInt& a, const ExtInt& b) {
  auto p = product_bound(a, b);
  if (!p) return std::nullopt;
  return canonical_bound(q.field(), *p + q.alpha_value(g, h));
}

void require_subring(const BoundPattern& r) {
  if (r.kind() != PatternKind::Subring) {
    throw Error(ErrorCode::KindMismatch, "expected a subring pattern, got a " + to_string(r.kind()) + " ideal");
  }
}

const BoundPattern& ring_of(const BoundPattern& p) { return p.ambient() ? *p.ambient() : p; }

}  // namespace

BoundPattern::BoundPattern(QPtr q, std::vector<ExtInt> bounds, PatternKind kind)
    : parent_(std::move(q)), bounds_(std::move(bounds)), kind_(kind) {
  if (bounds_.size() != parent_->size()) {
    throw Error(ErrorCode::ValidationError, "pattern has " + std::to_string(bounds_.size()) + " bounds for " +
                                                std::to_string(parent_->size()) + " groupoid elements");
  }
  for (auto& b : bounds_) b = canonical_bound(parent_->field(), b);
}

BoundPattern BoundPattern::subring(QPtr q, std::vector<ExtInt> bounds) {
  return BoundPattern(std::move(q), std::move(bounds), PatternKind::Subring);
}

BoundPattern BoundPattern::ideal(const BoundPattern& ring, std::vector<ExtInt> bounds, PatternKind kind) {
  if (kind == PatternKind::Subring) throw Error(ErrorCode::KindMismatch, "ideal kind expected");
  require_subring(ring);
  BoundPattern p(ring.parent(), std::move(bounds), kind);
  p.ambient_ = std::make_shared<const BoundPattern>(ring);
  return p;
}

bool BoundPattern::contains_homogeneous(Index g, const Scalar& c) const {
  return c.is_zero() || valuate(c) >= bounds_.at(g);
}

bool BoundPattern::contains(const GradedElement& x) const {
  if (x.parent() != parent_) throw Error(ErrorCode::ParentMismatch, "element of a different G-skewfield");
  for (const auto& [g, c] : x.coefficients()) {
    if (!contains_homogeneous(g, c)) return false;
  }
  return true;
}

std::string BoundPattern::to_string() const {
  std::string out = "{";
  for (Index g = 0; g < bounds_.size(); ++g) {
    if (g) out += ", ";
    out += parent_->groupoid().name(g) + ": " + bounds_[g].to_string();
  }
  return out + "}";
}

PatternReport validate_pattern(const BoundPattern& p) {
  PatternReport report;
  const GSkewfield& q = *p.parent();
  const Groupoid& g = q.groupoid();
  auto fail = [&](std::string w) {
    report.pass = false;
    if (report.witnesses.size() < 16) report.witnesses.push_back(std::move(w));
  };
  auto name = [&](Index x) { return g.name(x); };

  // Checks left * right lands inside target, bounds given explicitly.
  auto check = [&](const BoundPattern& left, const BoundPattern& right, const BoundPattern& target, const char* what) {
    for (Index a = 0; a < g.size(); ++a) {
      for (Index b = 0; b < g.size(); ++b) {
        auto ab = g.mult(a, b);
        if (!ab) continue;
        auto pb = product_component(q, a, b, left.bound(a), right.bound(b));
        if (pb && *pb < target.bound(*ab)) {
          fail(std::string(what) + ": b(" + name(a) + ") + b(" + name(b) + ") + w(alpha) = " + pb->to_string() +
               " < b(" + name(*ab) + ") = " + target.bound(*ab).to_string());
        }
      }
    }
  };

  if (p.kind() == PatternKind::Subring) {
    for (Index e : g.idempotents()) {
      if (p.bound(e) > ExtInt(0)) fail("1_" + name(e) + " is not a member: b(" + name(e) + ") = " + p.bound(e).to_string());
    }
    check(p, p, p, "closure");
    return report;
  }

  const BoundPattern& ring = ring_of(p);
  for (Index x = 0; x < g.size(); ++x) {
    if (p.bound(x) < ring.bound(x)) {
      fail("containment: b_I(" + name(x) + ") = " + p.bound(x).to_string() + " < b_R(" + name(x) +
           ") = " + ring.bound(x).to_string());
    }
  }
  if (has_left(p.kind())) check(ring, p, p, "left closure");
  if (has_right(p.kind())) check(p, ring, p, "right closure");
  return report;
}

bool is_g_total(const BoundPattern& r) {
  require_subring(r);
  const GSkewfield& q = *r.parent();
  const Groupoid& g = q.groupoid();
  for (Index x = 0; x < g.size(); ++x) {
    const Index xi = g.inverse(x);
    const ExtInt& b = r.bound(x);
    const ExtInt& bi = r.bound(xi);
    // h = c u_x with w(c) = m is in R iff m >= b; h^-1 is in R iff m <= -a - bi.
    // Totality fails iff some value m lies strictly between.
    if (!q.field().is_discrete()) {
      if (b.is_pos_inf() && bi.is_pos_inf()) return false;
      continue;
    }
    if (b.is_neg_inf() || bi.is_neg_inf()) continue;
    if (b.is_pos_inf() || bi.is_pos_inf()) return false;
    if (b.value() + bi.value() + q.alpha_value(x, xi) >= 2) return false;
  }
  return true;
}

bool is_g_stable(const BoundPattern& r) {
  require_subring(r);
  // h x h^-1 = sigma_g(d) u_s(g) for x = d u_t(g), and sigma preserves w.
  const Groupoid& g = r.parent()->groupoid();
  for (Index x = 0; x < g.size(); ++x) {
    if (r.bound(g.source(x)) != r.bound(g.target(x))) return false;
  }
  return true;
}

bool is_g_valuation_ring(const BoundPattern& r) { return is_g_total(r) && is_g_stable(r); }

std::vector<Scalar> window_scalars(const FieldDescriptor& field, int window) {
  std::vector<Scalar> out;
  switch (field.kind) {
    case FieldKind::Rationals:
      if (field.is_discrete()) {
        const std::int64_t p = field.valuation_prime;
        std::vector<Scalar> units{Scalar::one(field)};
        if (p > 2) units.push_back(Scalar::integer(field, p - 1));
        for (int m = -window; m <= window; ++m) {
          for (const auto& u : units) out.push_back(times_uniformizer_power(u, m));
        }
      } else {
        out = {Scalar::one(field), Scalar::integer(field, -1), Scalar::integer(field, 2),
               Scalar(field, mpq_class(1, 3)), Scalar(field, mpq_class(-5, 7))};
      }
      break;
    case FieldKind::Quadratic:
      out = {Scalar::one(field), Scalar::integer(field, -1), Scalar::root(field),
             Scalar(field, mpq_class(1), mpq_class(1)), Scalar(field, mpq_class(2), mpq_class(-3))};
      break;
    case FieldKind::Prime:
      for (std::int64_t v = 1; v < field.characteristic && v <= 4; ++v) out.push_back(Scalar::integer(field, v));
      break;
  }
  return out;
}

std::vector<ExtInt> close_bounds(const BoundPattern& ring, std::vector<ExtInt> m, Side side) {
  const GSkewfield& q = *ring.parent();
  const Groupoid& g = q.groupoid();
  const std::size_t n = g.size();
  for (auto& x : m) x = canonical_bound(q.field(), x);
  const bool left = side != Side::Right;
  const bool right = side != Side::Left;

  // Bellman-Ford over the min-plus relaxation: anything still dropping after
  // n rounds sits behind a negative cycle and goes to -inf.
  bool changed = true;
  for (std::size_t round = 0; changed && round <= 2 * n + 1; ++round) {
    changed = false;
    for (Index a = 0; a < n; ++a) {
      for (Index b = 0; b < n; ++b) {
        auto ab = g.mult(a, b);
        if (!ab) continue;
        std::optional<ExtInt> cands[2];
        if (left) cands[0] = product_component(q, a, b, ring.bound(a), m[b]);
        if (right) cands[1] = product_component(q, a, b, m[a], ring.bound(b));
        for (const auto& c : cands) {
          if (c && *c < m[*ab]) {
            m[*ab] = round >= n ? ExtInt::neg_inf() : *c;
            changed = true;
          }
        }
      }
    }
  }
  if (changed) throw Error(ErrorCode::DivergentClosure, "ideal closure did not stabilise");
  for (Index x = 0; x < n; ++x) {
    if (m[x] < ring.bound(x)) {
      throw Error(ErrorCode::DivergentClosure, "closure leaves the ring at " + g.name(x) + ": " + m[x].to_string() +
                                                   " < " + ring.bound(x).to_string());
    }
  }
  return m;
}

BoundPattern generated_ideal(const BoundPattern& ring, const std::vector<GradedElement>& generators, Side side) {
  require_subring(ring);
  std::vector<ExtInt> start(ring.size(), ExtInt::pos_inf());
  for (const auto& x : generators) {
    if (!ring.contains(x)) throw Error(ErrorCode::NotMember, x.to_string() + " is not in " + ring.to_string());
    for (const auto& [g, c] : x.coefficients()) start[g] = std::min(start[g], valuate(c));
  }
  return BoundPattern::ideal(ring, close_bounds(ring, std::move(start), side), kind_for(side));
}

BoundPattern principal_ideal(const BoundPattern& ring, const GradedElement& h, Side side) {
  return generated_ideal(ring, {h}, side);
}

std::optional<GradedElement> is_cyclic(const BoundPattern& ideal, Side side, int window) {
  const BoundPattern& ring = ring_of(ideal);
  const QPtr& q = ideal.parent();
  const Groupoid& g = q->groupoid();
  std::vector<Index> order(g.size());
  for (Index x = 0; x < g.size(); ++x) order[x] = x;
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return g.name(a) < g.name(b); });
  const int lo = q->field().is_discrete() ? -window : 0;
  const int hi = q->field().is_discrete() ? window : 0;
  for (Index x : order) {
    for (int m = lo; m <= hi; ++m) {
      GradedElement h = GradedElement::homogeneous(q, x, uniformizer_power(q->field(), m));
      if (!ideal.contains(h) || !ring.contains(h)) continue;
      if (principal_ideal(ring, h, side).same_bounds(ideal)) return h;
    }
  }
  return std::nullopt;
}

IdealComparison ideal_compare(const BoundPattern& i, const BoundPattern& j) {
  if (i.parent() != j.parent()) throw Error(ErrorCode::ParentMismatch, "ideals of different G-skewfields");
  IdealComparison out;
  for (Index x = 0; x < i.size(); ++x) {
    // Larger bound means smaller component.
    if (i.bound(x) < j.bound(x)) out.i_not_in_j.push_back(x);
    if (j.bound(x) < i.bound(x)) out.j_not_in_i.push_back(x);
  }
  if (out.i_not_in_j.empty() && out.j_not_in_i.empty()) {
    out.relation = Relation::Equal;
  } else if (out.i_not_in_j.empty()) {
    out.relation = Relation::Less;
  } else if (out.j_not_in_i.empty()) {
    out.relation = Relation::Greater;
  } else {
    out.relation = Relation::Incomparable;
  }

  const BoundPattern& ring = ring_of(i);
  if (i.kind() == PatternKind::Subring || j.kind() == PatternKind::Subring || i.kind() != j.kind()) return out;
  if (!is_g_total(ring) || !validate_pattern(i).pass || !validate_pattern(j).pass) return out;
  const Groupoid& g = i.parent()->groupoid();
  auto check = [&](const std::vector<Index>& bad, const BoundPattern& small, const BoundPattern& big) {
    // big_x not inside small_x forces small_y inside big_y for y sharing the unit.
    for (Index x : bad) {
      for (Index y = 0; y < g.size(); ++y) {
        bool shares = false;
        if (has_left(i.kind()) && g.target(y) == g.target(x)) shares = true;
        if (has_right(i.kind()) && g.source(y) == g.source(x)) shares = true;
        if (shares && small.bound(y) < big.bound(y)) {
          throw std::logic_error("ideal comparison contradicts totality at " + g.name(x) + " / " + g.name(y));
        }
      }
    }
  };
  check(out.j_not_in_i, i, j);
  check(out.i_not_in_j, j, i);
  return out;
}

Positives positives(const BoundPattern& ring) {
  if (!is_g_total(ring)) throw Error(ErrorCode::NotTotal, ring.to_string() + " is not G-total");
  const GSkewfield& q = *ring.parent();
  const Groupoid& g = q.groupoid();
  std::vector<ExtInt> p(g.size());
  for (Index x = 0; x < g.size(); ++x) {
    const ExtInt& b = ring.bound(x);
    const ExtInt& bi = ring.bound(g.inverse(x));
    if (b.is_pos_inf() || bi.is_neg_inf() || (!q.field().is_discrete() && bi == ExtInt(0))) {
      p[x] = ExtInt::pos_inf();
      continue;
    }
    // Members c u_x need w(c) >= b; the inverse leaves R once w(c) > -a - bi.
    ExtInt lo = bi.is_pos_inf() ? ExtInt::neg_inf() : ExtInt(-q.alpha_value(x, g.inverse(x)) - bi.value() + 1);
    p[x] = canonical_bound(q.field(), std::max(b, lo));
  }
  auto m = close_bounds(ring, p, Side::TwoSided);
  return Positives{std::move(p), BoundPattern::ideal(ring, std::move(m), PatternKind::TwoSidedIdeal)};
}

GradedElement ResidueSkewfield::reduce(const BoundPattern& ring, Index g, const Scalar& c) const {
  auto it = std::find(support.begin(), support.end(), g);
  if (it == support.end()) throw Error(ErrorCode::NotMember, "degree outside the residue support");
  const Index local = static_cast<Index>(it - support.begin());
  const std::int64_t b = ring.bound(g).value();
  Scalar shifted = ring.parent()->field().is_discrete() ? times_uniformizer_power(c, -b) : c;
  return GradedElement::homogeneous(skewfield, local, residue(shifted));
}

ResidueSkewfield residue_skewfield(const BoundPattern& ring) {
  Positives pos = positives(ring);
  const GSkewfield& q = *ring.parent();
  const Groupoid& g = q.groupoid();
  const FieldDescriptor& field = q.field();

  ResidueSkewfield out;
  std::vector<std::optional<Index>> local(g.size());
  for (Index x = 0; x < g.size(); ++x) {
    const ExtInt& b = ring.bound(x);
    const ExtInt& pm = pos.ideal.bound(x);
    if (!b.is_finite()) continue;
    if (pm == successor_bound(field, b)) {
      local[x] = out.support.size();
      out.support.push_back(x);
    } else if (pm.is_finite() && pm.value() - b.value() > 1) {
      throw Error(ErrorCode::LengthViolation, "component " + g.name(x) + " has length " +
                                                  std::to_string(pm.value() - b.value()));
    }
  }
  if (out.support.empty()) throw Error(ErrorCode::HypothesisViolation, "residue support is empty");

  const std::size_t n = out.support.size();
  std::vector<std::string> names;
  std::vector<std::vector<std::optional<Index>>> table(n, std::vector<std::optional<Index>>(n));
  for (Index a = 0; a < n; ++a) {
    names.push_back(g.name(out.support[a]));
    for (Index b = 0; b < n; ++b) {
      auto ab = g.mult(out.support[a], out.support[b]);
      if (!ab) continue;
      if (!local[*ab]) {
        throw Error(ErrorCode::HypothesisViolation, "residue support not closed at " + g.name(*ab));
      }
      table[a][b] = local[*ab];
    }
  }
  Groupoid sub = Groupoid::from_table(names, table);
  const FieldDescriptor rf = field.residue_field();
  Twist twist(sub, rf);
  for (Index a = 0; a < n; ++a) {
    const Index ga = out.support[a];
    twist.set_sigma(a, q.twist().sigma(ga));
    for (Index b = 0; b < n; ++b) {
      auto ab = g.mult(ga, out.support[b]);
      if (!ab) continue;
      const Index gb = out.support[b];
      Scalar alpha = *q.twist().alpha(ga, gb);
      if (field.is_discrete()) {
        std::int64_t shift = ring.bound(ga).value() + ring.bound(gb).value() - ring.bound(*ab).value();
        alpha = times_uniformizer_power(alpha, shift);
      }
      twist.set_alpha(a, b, residue(alpha));
    }
  }
  out.skewfield = GSkewfield::create_unchecked(rf, std::move(sub), std::move(twist));
  return out;
}

bool is_strongly_graded(const BoundPattern& ring) {
  const GSkewfield& q = *ring.parent();
  const Groupoid& g = q.groupoid();
  for (Index a = 0; a < g.size(); ++a) {
    for (Index b = 0; b < g.size(); ++b) {
      auto ab = g.mult(a, b);
      if (!ab) continue;
      auto pb = product_component(q, a, b, ring.bound(a), ring.bound(b));
      ExtInt got = pb ? *pb : ExtInt::pos_inf();
      if (got != ring.bound(*ab)) return false;
    }
  }
  return true;
}

std::vector<Index> component_representatives(const Groupoid& g) {
  std::vector<Index> reps;
  for (const auto& cls : connected_components(g).classes) {
    std::optional<Index> best;
    for (Index x : cls) {
      if (g.is_idempotent(x) && (!best || x < *best)) best = x;
    }
    reps.push_back(*best);
  }
  return reps;
}

BoundPattern extend_component_ideals(const BoundPattern& ring, const std::map<Index, ExtInt>& component_bounds) {
  require_subring(ring);
  if (!is_strongly_graded(ring)) throw Error(ErrorCode::NotStrong, ring.to_string() + " is not strongly graded");
  const GSkewfield& q = *ring.parent();
  const Groupoid& g = q.groupoid();
  const auto parts = connected_components(g);
  const auto reps = component_representatives(g);

  std::vector<ExtInt> bounds(g.size(), ExtInt::pos_inf());
  for (Index x = 0; x < g.size(); ++x) {
    const Index e = reps[parts.class_of[x]];
    auto it = component_bounds.find(e);
    if (it == component_bounds.end()) {
      throw Error(ErrorCode::ValidationError, "no component ideal given for " + g.name(e));
    }
    const ExtInt ie = canonical_bound(q.field(), it->second);
    if (ie < ring.bound(e)) {
      throw Error(ErrorCode::ValidationError, "component ideal at " + g.name(e) + " is not inside R_" + g.name(e));
    }
    // x = g1 e g2 with g1 : s(x) -> e and g2 = g1^-1 x.
    Index g1 = 0;
    while (!(g.source(g1) == g.source(x) && g.target(g1) == e)) ++g1;
    const Index g2 = *g.mult(g.inverse(g1), x);
    auto left = product_component(q, g1, e, ring.bound(g1), ie);
    if (!left) continue;
    auto full = product_component(q, g1, g2, *left, ring.bound(g2));
    if (full) bounds[x] = *full;
  }
  return BoundPattern::ideal(ring, std::move(bounds), PatternKind::TwoSidedIdeal);
}

std::map<Index, ExtInt> restrict_component_ideals(const BoundPattern& ideal) {
  std::map<Index, ExtInt> out;
  for (Index e : component_representatives(ideal.parent()->groupoid())) out[e] = ideal.bound(e);
  return out;
}

BoundPattern g_jacobson_radical(const BoundPattern& ring) {
  std::map<Index, ExtInt> comps;
  for (Index e : component_representatives(ring.parent()->groupoid())) {
    comps[e] = successor_bound(ring.parent()->field(), ring.bound(e));
  }
  return extend_component_ideals(ring, comps);
}

}  // namespace gradval
