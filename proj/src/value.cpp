#include "gradval/value.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "gradval/error.hpp"

namespace gradval {

namespace {

std::optional<ExtInt> product_component(const GSkewfield& q, Index g, Index h, const ExtInt& a, const ExtInt& b) {
  auto p = product_bound(a, b);
  if (!p) return std::nullopt;
  return canonical_bound(q.field(), *p + q.alpha_value(g, h));
}

std::string term_text(const std::string& cls, const std::string& omega) { return "[" + cls + "]: " + omega; }

}  // namespace

// ---------------------------------------------------------------------------
// CanonicalValuation

CanonicalValuation::CanonicalValuation(const BoundPattern& ring) : ring_(ring) {
  if (ring.kind() != PatternKind::Subring || !validate_pattern(ring).pass || !is_g_valuation_ring(ring)) {
    throw Error(ErrorCode::NotGValuationRing, ring.to_string() + " is not a G-valuation ring");
  }
  const GSkewfield& q = *ring.parent();
  const Groupoid& g = q.groupoid();
  const std::size_t n = g.size();
  const bool discrete = q.field().is_discrete();

  // Values y with y u_f an R-unit form the interval [lo, hi].
  struct Interval {
    bool unit = false;
    ExtInt lo, hi;
  };
  std::vector<Interval> units(n);
  for (Index f = 0; f < n; ++f) {
    const ExtInt& b = ring.bound(f);
    const ExtInt& bi = ring.bound(g.inverse(f));
    if (!discrete) {
      units[f] = {b == ExtInt(0) && bi == ExtInt(0), ExtInt(0), ExtInt(0)};
      continue;
    }
    if (b.is_pos_inf() || bi.is_pos_inf()) continue;
    ExtInt hi = bi.is_neg_inf() ? ExtInt::pos_inf() : ExtInt(-q.alpha_value(f, g.inverse(f)) - bi.value());
    units[f] = {b <= hi, b, hi};
  }

  // Moves of the unit action from degree x: (target degree, value interval shifted by alpha).
  struct Move {
    Index to;
    Interval shift;
    std::int64_t alpha;
  };
  auto moves = [&](Index x) {
    std::vector<Move> out;
    for (Index f = 0; f < n; ++f) {
      if (!units[f].unit) continue;
      if (auto fx = g.mult(f, x)) out.push_back({*fx, units[f], q.alpha_value(f, x)});
      if (auto xf = g.mult(x, f)) out.push_back({*xf, units[f], q.alpha_value(x, f)});
    }
    return out;
  };

  // Degree orbits first, so that every orbit can start from its preferred representative.
  std::vector<std::optional<std::size_t>> comp(n);
  std::vector<std::vector<Index>> comps;
  for (Index start = 0; start < n; ++start) {
    if (comp[start]) continue;
    comps.emplace_back();
    std::deque<Index> todo{start};
    comp[start] = comps.size() - 1;
    while (!todo.empty()) {
      Index x = todo.front();
      todo.pop_front();
      comps.back().push_back(x);
      for (const auto& m : moves(x)) {
        if (!comp[m.to]) {
          comp[m.to] = comps.size() - 1;
          todo.push_back(m.to);
        }
      }
    }
  }

  orbit_index_.assign(n, 0);
  shift_.assign(n, 0);
  for (auto& members : comps) {
    std::sort(members.begin(), members.end());
    Index rep = members.front();
    for (Index x : members) {
      if (g.is_idempotent(x)) {
        rep = x;
        break;
      }
    }
    OmegaOrbit orbit;
    orbit.rep = rep;
    orbit.degrees = members;
    std::int64_t loop = 0;
    std::vector<bool> seen(n, false);
    std::deque<Index> todo{rep};
    seen[rep] = true;
    shift_[rep] = 0;
    while (!todo.empty()) {
      Index x = todo.front();
      todo.pop_front();
      for (const auto& m : moves(x)) {
        std::int64_t base = 0;
        if (m.shift.lo.is_finite() && m.shift.hi.is_finite()) {
          base = m.shift.lo.value();
          loop = std::gcd(loop, m.shift.hi.value() - m.shift.lo.value());
        } else {
          loop = 1;
          if (m.shift.lo.is_finite()) base = m.shift.lo.value();
          if (m.shift.hi.is_finite()) base = m.shift.hi.value();
        }
        const std::int64_t candidate = shift_[x] + base + m.alpha;
        if (!seen[m.to]) {
          seen[m.to] = true;
          shift_[m.to] = candidate;
          todo.push_back(m.to);
        } else {
          loop = std::gcd(loop, candidate - shift_[m.to]);
        }
      }
    }
    orbit.loop = loop < 0 ? -loop : loop;
    for (Index x : members) orbit_index_[x] = orbits_.size();
    orbits_.push_back(std::move(orbit));
  }

  // reach[from][to]: min over r_s u_from r_t landing in degree to.
  reach_.assign(n * n, std::nullopt);
  for (Index from = 0; from < n; ++from) {
    for (Index to = 0; to < n; ++to) {
      std::optional<ExtInt> best;
      for (Index g1 = 0; g1 < n; ++g1) {
        if (g.source(g1) != g.source(to) || g.target(g1) != g.source(from)) continue;
        const Index g1f = *g.mult(g1, from);
        const Index g2 = *g.mult(g.inverse(g1f), to);
        auto left = product_component(q, g1, from, ring.bound(g1), ExtInt(0));
        if (!left) continue;
        auto full = product_component(q, g1f, g2, *left, ring.bound(g2));
        if (!full) continue;
        if (!best || *full < *best) best = *full;
      }
      reach_[from * n + to] = best;
    }
  }

  // G-bar: mutual reachability classes.
  gbar_of_.assign(n, 0);
  std::vector<bool> placed(n, false);
  for (Index x = 0; x < n; ++x) {
    if (placed[x]) continue;
    std::vector<Index> cls;
    for (Index y = x; y < n; ++y) {
      if (!placed[y] && reach(x, y) && reach(y, x)) {
        placed[y] = true;
        gbar_of_[y] = gbar_classes_.size();
        cls.push_back(y);
      }
    }
    gbar_classes_.push_back(std::move(cls));
  }
  const std::size_t k = gbar_classes_.size();
  // c < d when every h in Q_c lies below every h' in Q_d, whatever their values.
  auto always_below = [&](Index x, Index y) {
    auto r = reach(x, y);
    return r && (r->is_neg_inf() || !discrete);
  };
  gbar_lt_.assign(k * k, false);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t d = 0; d < k; ++d) {
      if (c == d) continue;
      bool all = true;
      for (Index x : gbar_classes_[c]) {
        for (Index y : gbar_classes_[d]) all = all && always_below(x, y);
      }
      gbar_lt_[c * k + d] = all;
    }
  }
}

void CanonicalValuation::set_offset_scale(std::int64_t k) {
  if (k < 1) throw Error(ErrorCode::ValidationError, "offset scale must be positive");
  scale_ = k;
}

OmegaClass CanonicalValuation::decode(const OmegaClass& w) const { return {w.rep, w.offset / scale_}; }
OmegaClass CanonicalValuation::encode(const OmegaClass& w) const { return {w.rep, w.offset * scale_}; }

OmegaClass CanonicalValuation::omega(Index g, std::int64_t x) const {
  const OmegaOrbit& o = orbit_of(g);
  std::int64_t off = x - shift_[g];
  if (o.loop > 0) off = ((off % o.loop) + o.loop) % o.loop;
  return encode({o.rep, off});
}

OmegaClass CanonicalValuation::omega_of(const GradedElement& h) const {
  auto d = h.degree();
  if (!d) throw Error(ErrorCode::ValidationError, "Omega classes are defined for nonzero homogeneous elements");
  return omega(*d, valuate(h.coefficient(*d)).value());
}

bool CanonicalValuation::omega_ge(const OmegaClass& a_ext, const OmegaClass& b_ext) const {
  if (dropped_.count({a_ext, b_ext})) return false;
  if (a_ext == b_ext) return true;
  const OmegaClass a = decode(a_ext);
  const OmegaClass b = decode(b_ext);
  const OmegaOrbit& oa = orbit_of(a.rep);
  const OmegaOrbit& ob = orbit_of(b.rep);
  // a >= b iff some representative of a equals r_s y r_t with y = (b.rep, b.offset).
  for (Index x : oa.degrees) {
    auto m = reach(b.rep, x);
    if (!m) continue;
    if (oa.loop != 0 || ob.loop != 0 || m->is_neg_inf()) return true;
    if (shift_[x] + a.offset - b.offset >= m->value()) return true;
  }
  return false;
}

std::optional<OmegaClass> CanonicalValuation::omega_product(const OmegaClass& a_ext, const OmegaClass& b_ext) const {
  const OmegaClass a = decode(a_ext);
  const OmegaClass b = decode(b_ext);
  const Groupoid& g = parent()->groupoid();
  for (Index x : orbit_of(a.rep).degrees) {
    for (Index y : orbit_of(b.rep).degrees) {
      auto xy = g.mult(x, y);
      if (!xy) continue;
      return omega(*xy, shift_[x] + a.offset + shift_[y] + b.offset + parent()->alpha_value(x, y));
    }
  }
  return std::nullopt;
}

std::vector<OmegaClass> CanonicalValuation::omega_idempotents() const {
  std::vector<OmegaClass> out;
  for (Index e : parent()->groupoid().idempotents()) {
    OmegaClass w = omega(e, 0);
    if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
  }
  return out;
}

std::string CanonicalValuation::render_omega(const OmegaClass& w) const {
  return "(" + parent()->groupoid().name(w.rep) + ", " + std::to_string(w.offset) + ")";
}

std::string CanonicalValuation::gbar_name(std::size_t c) const {
  return parent()->groupoid().name(gbar_classes_.at(c).front());
}

GammaValue CanonicalValuation::value_of_homogeneous(Index g, std::int64_t x) const {
  GammaValue v;
  v.terms[gbar_of_[g]] = omega(g, x);
  return v;
}

GammaValue CanonicalValuation::value(const GradedElement& x) const {
  if (x.is_zero()) return GammaValue::infinity();
  std::set<std::size_t> present;
  for (const auto& [g, c] : x.coefficients()) present.insert(gbar_of_[g]);
  GammaValue out;
  for (std::size_t c : present) {
    bool minimal = true;
    for (std::size_t d : present) minimal = minimal && !gbar_lt(d, c);
    if (!minimal) continue;
    std::vector<OmegaClass> cands;
    for (const auto& [g, a] : x.coefficients()) {
      if (gbar_of_[g] == c) cands.push_back(omega(g, valuate(a).value()));
    }
    std::optional<OmegaClass> least;
    for (const auto& m : cands) {
      bool below_all = true;
      for (const auto& o : cands) below_all = below_all && omega_ge(o, m);
      if (below_all) {
        least = m;
        break;
      }
    }
    if (!least) {
      throw Error(ErrorCode::IncomparableComponents,
                  "components of " + x.to_string() + " in class [" + gbar_name(c) + "] have no least value");
    }
    out.terms[c] = *least;
  }
  return out;
}

bool CanonicalValuation::ge(const GammaValue& a, const GammaValue& b) const {
  return formal_sum_ge(
      a, b, gbar_classes_.size(), [&](std::size_t c, std::size_t d) { return gbar_lt(c, d); },
      [&](const OmegaClass& x, const OmegaClass& y) { return omega_ge(x, y); });
}

std::optional<GammaValue> CanonicalValuation::product(const GammaValue& a, const GammaValue& b) const {
  if (a.infinite || b.infinite) return GammaValue::infinity();
  if (!a.is_single() || !b.is_single()) return std::nullopt;
  auto w = omega_product(a.terms.begin()->second, b.terms.begin()->second);
  if (!w) return std::nullopt;
  GammaValue out;
  out.terms[gbar_of_[decode(*w).rep]] = *w;
  return out;
}

std::string CanonicalValuation::render(const GammaValue& a) const {
  if (a.infinite) return "inf";
  std::string out;
  for (const auto& [c, w] : a.terms) {
    if (!out.empty()) out += " + ";
    out += term_text(gbar_name(c), render_omega(w));
  }
  return out;
}

std::vector<GammaValue> CanonicalValuation::gamma_idempotents() const {
  std::vector<GammaValue> out;
  for (Index e : parent()->groupoid().idempotents()) {
    GammaValue v = value_of_homogeneous(e, 0);
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// OrderedGroupoidValuation

OrderedGroupoidValuation::OrderedGroupoidValuation(QPtr q, GroupoidOrder order)
    : q_(std::move(q)), order_(std::move(order)) {
  if (!(order_.base() == q_->groupoid())) {
    throw Error(ErrorCode::ParentMismatch, "order is defined on a different groupoid");
  }
}

GammaValue OrderedGroupoidValuation::value_of_homogeneous(Index g, std::int64_t x) const {
  GammaValue v;
  v.terms[g] = OmegaClass{g, x};
  return v;
}

GammaValue OrderedGroupoidValuation::value(const GradedElement& x) const {
  if (x.is_zero()) return GammaValue::infinity();
  GammaValue out;
  for (const auto& [g, c] : x.coefficients()) {
    bool minimal = true;
    for (const auto& [h, d] : x.coefficients()) minimal = minimal && !order_.lt(h, g);
    if (minimal) out.terms[g] = OmegaClass{g, valuate(c).value()};
  }
  return out;
}

bool OrderedGroupoidValuation::ge(const GammaValue& a, const GammaValue& b) const {
  return formal_sum_ge(
      a, b, q_->size(), [&](std::size_t c, std::size_t d) { return order_.lt(c, d); },
      [](const OmegaClass& x, const OmegaClass& y) { return x.rep == y.rep && x.offset >= y.offset; });
}

std::optional<GammaValue> OrderedGroupoidValuation::product(const GammaValue& a, const GammaValue& b) const {
  if (a.infinite || b.infinite) return GammaValue::infinity();
  if (!a.is_single() || !b.is_single()) return std::nullopt;
  const auto& [g, x] = *a.terms.begin();
  const auto& [h, y] = *b.terms.begin();
  auto gh = q_->groupoid().mult(g, h);
  if (!gh) return std::nullopt;
  return value_of_homogeneous(*gh, x.offset + y.offset + q_->alpha_value(g, h));
}

std::string OrderedGroupoidValuation::render(const GammaValue& a) const {
  if (a.infinite) return "inf";
  std::string out;
  for (const auto& [c, w] : a.terms) {
    if (!out.empty()) out += " + ";
    const std::string& name = q_->groupoid().name(c);
    out += term_text(name, "(" + name + ", " + std::to_string(w.offset) + ")");
  }
  return out;
}

// ---------------------------------------------------------------------------

BoundPattern subring_closure(const QPtr& q, std::vector<ExtInt> b) {
  const Groupoid& g = q->groupoid();
  const std::size_t n = g.size();
  for (auto& x : b) x = canonical_bound(q->field(), x);
  for (Index e : g.idempotents()) b[e] = std::min(b[e], ExtInt(0));
  bool changed = true;
  for (std::size_t round = 0; changed && round <= 3 * n + 3; ++round) {
    changed = false;
    for (Index x = 0; x < n; ++x) {
      for (Index y = 0; y < n; ++y) {
        auto xy = g.mult(x, y);
        if (!xy) continue;
        auto c = product_component(*q, x, y, b[x], b[y]);
        if (c && *c < b[*xy]) {
          b[*xy] = round >= 2 * n + 1 ? ExtInt::neg_inf() : *c;
          changed = true;
        }
      }
    }
  }
  if (changed) throw Error(ErrorCode::DivergentClosure, "subring closure did not stabilise");
  return BoundPattern::subring(q, std::move(b));
}

std::pair<BoundPattern, BoundPattern> recover_rings(const Valuation& v) {
  const QPtr& q = v.parent();
  const Groupoid& g = q->groupoid();
  const bool discrete = q->field().is_discrete();
  constexpr std::int64_t kBound = std::int64_t{1} << 30;

  // Least value x with pred(x); the predicates are upward closed in x.
  auto threshold = [&](auto pred) -> ExtInt {
    if (!discrete) return pred(0) ? ExtInt(0) : ExtInt::pos_inf();
    if (pred(-kBound)) return ExtInt::neg_inf();
    if (!pred(kBound)) return ExtInt::pos_inf();
    std::int64_t lo = -kBound, hi = kBound;
    while (hi - lo > 1) {
      std::int64_t mid = lo + (hi - lo) / 2;
      (pred(mid) ? hi : lo) = mid;
    }
    return ExtInt(hi);
  };

  std::vector<ExtInt> t(g.size()), s(g.size());
  for (Index x = 0; x < g.size(); ++x) {
    const GammaValue vt = v.value_of_homogeneous(g.target(x), 0);
    const GammaValue vs = v.value_of_homogeneous(g.source(x), 0);
    t[x] = threshold([&](std::int64_t m) { return v.ge(v.value_of_homogeneous(x, m), vt); });
    s[x] = threshold([&](std::int64_t m) { return v.ge(v.value_of_homogeneous(x, m), vs); });
  }
  return {subring_closure(q, std::move(t)), subring_closure(q, std::move(s))};
}

Scalar random_scalar(const FieldDescriptor& field, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-30, 30), den(1, 30), exp(-2, 2);
  auto nonzero = [&]() {
    long n = 0;
    while (n == 0) n = num(rng);
    return mpq_class(n, den(rng));
  };
  switch (field.kind) {
    case FieldKind::Rationals: {
      Scalar c(field, nonzero());
      return field.is_discrete() ? times_uniformizer_power(c, exp(rng)) : c;
    }
    case FieldKind::Quadratic: {
      mpq_class x = nonzero(), y = nonzero();
      if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) x = 0;
      return Scalar(field, x, y);
    }
    case FieldKind::Prime:
      return Scalar::integer(field, std::uniform_int_distribution<long>(1, field.characteristic - 1)(rng));
  }
  return Scalar::one(field);
}

std::vector<Scalar> sample_scalars(const FieldDescriptor& field, std::mt19937_64& rng, std::size_t count) {
  std::vector<Scalar> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_scalar(field, rng));
  return out;
}

GradedElement random_element(const QPtr& q, std::mt19937_64& rng, double density) {
  std::bernoulli_distribution pick(density);
  GradedElement x(q);
  for (Index g = 0; g < q->size(); ++g) {
    if (pick(rng)) x.set(g, random_scalar(q->field(), rng));
  }
  if (x.is_zero()) {
    Index g = std::uniform_int_distribution<Index>(0, q->size() - 1)(rng);
    x.set(g, random_scalar(q->field(), rng));
  }
  return x;
}

GradedElement random_member(const BoundPattern& ring, std::mt19937_64& rng, double density) {
  const QPtr& q = ring.parent();
  const FieldDescriptor& field = q->field();
  std::vector<Index> open;
  for (Index g = 0; g < q->size(); ++g) {
    if (!ring.bound(g).is_pos_inf()) open.push_back(g);
  }
  if (open.empty()) throw Error(ErrorCode::ValidationError, "pattern has no nonzero component");
  auto member = [&](Index g) {
    Scalar c = random_scalar(field, rng);
    const ExtInt& b = ring.bound(g);
    if (field.is_discrete() && b.is_finite()) {
      const std::int64_t lift = std::uniform_int_distribution<std::int64_t>(0, 2)(rng);
      c = times_uniformizer_power(c, b.value() + lift - valuate(c).value());
    }
    return c;
  };
  std::bernoulli_distribution pick(density);
  GradedElement x(q);
  for (Index g : open) {
    if (pick(rng)) x.set(g, member(g));
  }
  if (x.is_zero()) {
    Index g = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
    x.set(g, member(g));
  }
  return x;
}

GradedElement random_nonmember(const BoundPattern& ring, std::mt19937_64& rng) {
  const QPtr& q = ring.parent();
  std::vector<Index> room;
  for (Index g = 0; g < q->size(); ++g) {
    const ExtInt& b = ring.bound(g);
    if (b.is_pos_inf() || (b.is_finite() && q->field().is_discrete())) room.push_back(g);
  }
  if (room.empty()) throw Error(ErrorCode::ValidationError, "pattern is the whole ring");
  GradedElement x = random_element(q, rng);
  // Push one component below its bound.
  const Index g = room[std::uniform_int_distribution<std::size_t>(0, room.size() - 1)(rng)];
  const ExtInt& b = ring.bound(g);
  Scalar c = random_scalar(q->field(), rng);
  if (b.is_finite()) {
    const std::int64_t drop = std::uniform_int_distribution<std::int64_t>(1, 3)(rng);
    c = times_uniformizer_power(c, b.value() - drop - valuate(c).value());
  }
  x.set(g, c);
  return x;
}

namespace {

std::vector<GradedElement> window_elements(const QPtr& q, int window) {
  std::vector<GradedElement> out;
  const auto scalars = window_scalars(q->field(), window);
  for (Index g = 0; g < q->size(); ++g) {
    for (const auto& c : scalars) out.push_back(GradedElement::homogeneous(q, g, c));
  }
  return out;
}

void record(AxiomCheck& c, bool ok, const std::string& witness) {
  ++c.cases;
  if (ok) return;
  c.pass = false;
  if (c.witnesses.size() < 5) c.witnesses.push_back(witness);
}

}  // namespace

AxiomReport check_axioms(const Valuation& v, const AxiomOptions& options) {
  const QPtr& q = v.parent();
  const Groupoid& g = q->groupoid();
  std::mt19937_64 rng(options.seed);
  auto named = [](const char* name) {
    AxiomCheck c;
    c.name = name;
    return c;
  };
  AxiomCheck a1 = named("nondegenerate"), a2 = named("ultrametric"), a3 = named("multiplicative"),
             a4 = named("canonical"), a4_sums = named("canonical-sums"), assoc = named("associative"),
             defined = named("defined");

  const auto hs = window_elements(q, options.window);
  std::vector<GammaValue> hv;
  hv.reserve(hs.size());
  for (const auto& h : hs) hv.push_back(v.value(h));

  record(a1, v.value(GradedElement::zero(q)).infinite, "v(0) is finite");
  for (std::size_t i = 0; i < hs.size(); ++i) record(a1, !hv[i].infinite, "v(" + hs[i].to_string() + ") = inf");

  auto ultrametric = [&](const GradedElement& x, const GammaValue& vx, const GradedElement& y, const GammaValue& vy,
                         const GradedElement& z, const GammaValue& vz) {
    if (!v.ge(vx, vz) || !v.ge(vy, vz)) return;
    const GammaValue vs = v.value(x + y);
    record(a2, v.ge(vs, vz),
           "x = " + x.to_string() + ", y = " + y.to_string() + ", z = " + z.to_string() + ": v(x+y) = " +
               v.render(vs) + " is not >= v(z) = " + v.render(vz));
  };

  auto canonical = [&](const GradedElement& x, const GammaValue& vx) {
    auto [s, t] = source_target(x);
    const bool above_t = v.ge(vx, v.value(t));
    const bool above_s = v.ge(vx, v.value(s));
    record(x.is_homogeneous() ? a4 : a4_sums, above_t == above_s,
           "x = " + x.to_string() + ": v(x) >= v(t(x)) is " + (above_t ? "true" : "false") +
               " but v(x) >= v(s(x)) is " + (above_s ? "true" : "false"));
  };

  for (std::size_t i = 0; i < hs.size(); ++i) {
    canonical(hs[i], hv[i]);
    const Index gi = *hs[i].degree();
    for (std::size_t j = 0; j < hs.size(); ++j) {
      ultrametric(hs[i], hv[i], hs[j], hv[j], hs[i], hv[i]);
      const Index gj = *hs[j].degree();
      if (!g.mult(gi, gj)) continue;
      auto expected = v.product(hv[i], hv[j]);
      const GammaValue got = v.value(hs[i] * hs[j]);
      record(a3, expected && *expected == got,
             "h = " + hs[i].to_string() + ", h' = " + hs[j].to_string() + ": v(hh') = " + v.render(got) +
                 (expected ? " but v(h)v(h') = " + v.render(*expected) : " but v(h)v(h') is undefined"));
    }
  }

  // Basis triples decide associativity of the twisted product outright.
  for (Index f = 0; f < g.size(); ++f) {
    for (Index h = 0; h < g.size(); ++h) {
      if (!g.mult(f, h)) continue;
      for (Index k = 0; k < g.size(); ++k) {
        if (!g.mult(h, k)) continue;
        auto uf = GradedElement::unit(q, f), uh = GradedElement::unit(q, h), uk = GradedElement::unit(q, k);
        record(assoc, (uf * uh) * uk == uf * (uh * uk),
               "(u_" + g.name(f) + " u_" + g.name(h) + ") u_" + g.name(k) + " != u_" + g.name(f) + " (u_" +
                   g.name(h) + " u_" + g.name(k) + ")");
      }
    }
  }

  for (std::size_t i = 0; i < options.random_triples; ++i) {
    GradedElement x = random_element(q, rng), y = random_element(q, rng), z = random_element(q, rng);
    // A broken order can leave v undefined on a sum; that is a failure, not an abort.
    try {
      const GammaValue vx = v.value(x), vy = v.value(y), vz = v.value(z);
      record(a1, !vx.infinite, "v(" + x.to_string() + ") = inf");
      ultrametric(x, vx, y, vy, z, vz);
      ultrametric(x, vx, y, vy, x, vx);
      ultrametric(x, vx, y, vy, y, vy);
      canonical(x, vx);
      record(defined, true, "");
    } catch (const Error& e) {
      if (e.code() != ErrorCode::IncomparableComponents) throw;
      record(defined, false, e.what());
    }
    record(assoc, (x * y) * z == x * (y * z),
           "x = " + x.to_string() + ", y = " + y.to_string() + ", z = " + z.to_string());
  }

  AxiomReport report;
  report.checks = {a1, a2, a3, a4, a4_sums, assoc, defined};
  return report;
}

SetComparison positives_agree(const Valuation& v, const BoundPattern& ring, int window) {
  SetComparison out;
  const QPtr& q = v.parent();
  const Groupoid& g = q->groupoid();
  for (const auto& h : window_elements(q, window)) {
    if (!ring.contains(h)) continue;
    ++out.cases;
    auto inv = g_inverse(h);
    const bool not_unit = !inv || !ring.contains(*inv);
    const GammaValue vh = v.value(h);
    const GammaValue vt = v.value_of_homogeneous(g.target(*h.degree()), 0);
    const bool positive = v.gt(vh, vt);
    if (not_unit != positive) {
      out.equal = false;
      if (out.witnesses.size() < 5) {
        out.witnesses.push_back("h = " + h.to_string() + ": h^-1 " + (not_unit ? "not in R" : "in R") +
                                " but v(h) " + (positive ? ">" : "not >") + " v(t(h))");
      }
    }
  }
  return out;
}

EquivalenceReport equivalent(const Valuation& v, const Valuation& w, int window) {
  if (v.parent() != w.parent()) throw Error(ErrorCode::ParentMismatch, "valuations on different G-skewfields");
  EquivalenceReport out;
  out.equivalent = recover_rings(v).first.same_bounds(recover_rings(w).first);
  if (!out.equivalent) return out;
  // f = w o v^-1 on the sample: well defined, injective and monotone both ways.
  const auto hs = window_elements(v.parent(), window);
  std::vector<GammaValue> vv, wv;
  for (const auto& h : hs) {
    vv.push_back(v.value(h));
    wv.push_back(w.value(h));
  }
  out.sampled = hs.size();
  for (std::size_t i = 0; i < hs.size(); ++i) {
    for (std::size_t j = 0; j < hs.size(); ++j) {
      const bool same = (vv[i] == vv[j]) == (wv[i] == wv[j]);
      const bool order = v.ge(vv[i], vv[j]) == w.ge(wv[i], wv[j]);
      if (!same || !order) {
        out.map_consistent = false;
        if (out.witnesses.size() < 5) out.witnesses.push_back(hs[i].to_string() + " vs " + hs[j].to_string());
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

ConjugateRing::ConjugateRing(const BoundPattern& ring, const GradedElement& q)
    : ring_(ring), q_(q), q_inv_(q.parent()) {
  if (q.parent() != ring.parent()) throw Error(ErrorCode::ParentMismatch, "conjugating element of another ring");
  auto inv = g_inverse(q);
  const GradedElement one = GradedElement::one(q.parent());
  if (!inv || q * *inv != one || *inv * q != one) {
    throw Error(ErrorCode::NotInvertible, q.to_string() + " is not a unit");
  }
  q_inv_ = *inv;
}

bool ConjugateRing::contains(const GradedElement& y) const { return ring_.contains(q_inv_ * y * q_); }

GradedElement ConjugateRing::homogeneous(Index g, const Scalar& c) const {
  return q_ * GradedElement::homogeneous(q_.parent(), g, c) * q_inv_;
}

GradedElement ConjugateRing::transported_inverse(const GradedElement& y) const {
  auto inv = g_inverse(q_inv_ * y * q_);
  if (!inv) throw Error(ErrorCode::NotInvertible, y.to_string() + " has no G-inverse in the transported grading");
  return q_ * *inv * q_inv_;
}

// ---------------------------------------------------------------------------

DubrovinReport dubrovin_check(const BoundPattern& ring) {
  const GSkewfield& q = *ring.parent();
  const Groupoid& g = q.groupoid();
  if (connected_components(g).classes.size() != 1) {
    throw Error(ErrorCode::HypothesisViolation, "groupoid is not connected");
  }
  for (Index e : g.idempotents()) {
    if (g.isotropy(e).size() != 1) {
      throw Error(ErrorCode::HypothesisViolation, "groupoid has nontrivial isotropy at " + g.name(e));
    }
  }
  for (Index x = 0; x < g.size(); ++x) {
    if (ring.bound(x) > ExtInt(0)) {
      throw Error(ErrorCode::HypothesisViolation,
                  "R does not contain u_" + g.name(x) + " (bound " + ring.bound(x).to_string() + ")");
    }
  }
  if (ring.kind() != PatternKind::Subring || !validate_pattern(ring).pass || !is_g_valuation_ring(ring)) {
    throw Error(ErrorCode::HypothesisViolation, "R is not a G-valuation ring");
  }
  DubrovinReport report;
  ResidueSkewfield res = residue_skewfield(ring);
  report.residue_support = res.support.size();
  report.residue_simple_artinian =
      res.support.size() == g.size() && connected_components(res.skewfield->groupoid()).classes.size() == 1;
  report.gamma_is_group = CanonicalValuation(ring).gamma_idempotents().size() == 1;
  return report;
}

DubrovinWitness dubrovin_witness(const BoundPattern& ring, const GradedElement& x) {
  if (ring.contains(x)) throw Error(ErrorCode::ValidationError, x.to_string() + " lies in R");
  CanonicalValuation v(ring);
  std::optional<Index> best;
  GammaValue best_value;
  for (const auto& [g, c] : x.coefficients()) {
    GammaValue val = v.value_of_homogeneous(g, valuate(c).value());
    if (!best || v.gt(best_value, val)) {
      best = g;
      best_value = val;
    }
  }
  const GradedElement h = GradedElement::homogeneous(x.parent(), *best, x.coefficient(*best));
  const GradedElement r = *g_inverse(h);
  const BoundPattern m = positives(ring).ideal;
  const GradedElement xr = x * r, rx = r * x;
  DubrovinWitness out{r, r, false};
  out.verified = ring.contains(r) && ring.contains(xr) && !m.contains(xr) && ring.contains(rx) && !m.contains(rx);
  return out;
}

}  // namespace gradval
