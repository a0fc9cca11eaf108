#include <doctest.h>

#include <random>

#include "gradval/error.hpp"
#include "gradval/value.hpp"
#include "support/oracles.hpp"

using namespace gradval;

namespace {

const ExtInt NI = ExtInt::neg_inf();
const ExtInt PI = ExtInt::pos_inf();

QPtr m2q() {
  static const QPtr q = [] {
    const auto f = FieldDescriptor::padic_rationals(5);
    Groupoid g = delta(2);
    Twist t(g, f);
    return GSkewfield::create(f, std::move(g), std::move(t));
  }();
  return q;
}

BoundPattern m2() { return BoundPattern::subring(m2q(), {0, 0, 0, 0}); }
BoundPattern gvalex() { return BoundPattern::subring(m2q(), {0, NI, PI, 0}); }

GradedElement mat(const std::string& text) { return GradedElement::parse(m2q(), text); }

// Homogeneous G-invertible elements of R in degree g.
GradedElement random_ring_unit(const BoundPattern& r, Index g, std::mt19937_64& rng) {
  const auto& f = r.parent()->field();
  for (;;) {
    const auto h = GradedElement::homogeneous(r.parent(), g, Scalar(f, oracle::random_rational(rng, 2)));
    if (r.contains(h) && r.contains(oracle::homogeneous_inverse(h))) return h;
  }
}

}  // namespace

TEST_CASE("value groupoid of M_2 over the 5-adic integers") {
  CanonicalValuation v(m2());
  CHECK(v.orbits().size() == 1);
  CHECK(v.orbits()[0].loop == 0);
  CHECK(v.gbar_classes().size() == 1);
  for (Index g = 0; g < 4; ++g) CHECK(v.omega(g, 3) == v.omega(0, 3));
  CHECK(v.omega_ge(v.omega(1, 2), v.omega(2, 1)));
  CHECK_FALSE(v.omega_ge(v.omega(1, 0), v.omega(2, 1)));
  CHECK(v.gamma_idempotents().size() == 1);
  CHECK(v.value(GradedElement::one(m2q())) == v.value_of_homogeneous(0, 0));
  CHECK(v.value(GradedElement::zero(m2q())).infinite);
}

TEST_CASE("value groupoid of the triangular ring") {
  CanonicalValuation v(gvalex());
  CHECK(v.orbits().size() == 4);
  CHECK(v.gbar_classes().size() == 4);
  const auto e11 = v.omega(0, 0), e12 = v.omega(1, 0), e21 = v.omega(2, 0), e22 = v.omega(3, 0);
  CHECK_FALSE(v.omega_ge(e11, e22));
  CHECK_FALSE(v.omega_ge(e22, e11));
  CHECK(v.omega_ge(e12, e11));
  CHECK(v.omega_ge(e12, e22));
  CHECK(v.omega_ge(e11, e21));
  CHECK(v.omega_ge(e22, e21));
  CHECK(v.gamma_idempotents().size() == 2);
}

TEST_CASE("the whole G-skewfield has trivial value groupoid") {
  CanonicalValuation v(BoundPattern::subring(m2q(), {NI, NI, NI, NI}));
  for (Index g = 0; g < 4; ++g) CHECK(v.omega(g, 3) == v.omega(g, -2));
}

TEST_CASE("Omega classes are constant on unit orbits") {
  std::mt19937_64 rng(41);
  for (const auto& r : {m2(), gvalex(), oracle::corpus("quaternion").subring.value(),
                        oracle::corpus("twisted-padic").subring.value()}) {
    CanonicalValuation v(r);
    const auto& g = r.parent()->groupoid();
    std::uniform_int_distribution<Index> pick(0, g.size() - 1);
    for (int n = 0; n < 500; ++n) {
      const Index d = pick(rng);
      const auto h = GradedElement::homogeneous(r.parent(), d, Scalar(r.parent()->field(), oracle::random_rational(rng)));
      // Left multiplier ends at s(d), right multiplier starts at t(d).
      Index a = pick(rng), b = pick(rng);
      while (g.target(a) != g.source(d)) a = pick(rng);
      while (g.source(b) != g.target(d)) b = pick(rng);
      if (r.bound(a) == PI || r.bound(g.inverse(a)) == PI || r.bound(b) == PI || r.bound(g.inverse(b)) == PI) continue;
      const auto moved = random_ring_unit(r, a, rng) * h * random_ring_unit(r, b, rng);
      CHECK(v.omega_of(moved) == v.omega_of(h));
    }
  }
}

TEST_CASE("Omega order is antisymmetric, compatible and ordered") {
  for (const auto& r : {m2(), gvalex(), oracle::corpus("twisted-padic").subring.value()}) {
    CanonicalValuation v(r);
    const auto& g = r.parent()->groupoid();
    std::vector<std::pair<Index, OmegaClass>> cls;
    for (Index d = 0; d < g.size(); ++d) {
      for (int m = -3; m <= 3; ++m) cls.emplace_back(d, v.omega(d, m));
    }
    for (const auto& [d, a] : cls) {
      CHECK((v.omega_ge(a, v.omega(g.source(d), 0)) || v.omega_ge(v.omega(g.source(d), 0), a)));
      CHECK((v.omega_ge(a, v.omega(g.target(d), 0)) || v.omega_ge(v.omega(g.target(d), 0), a)));
      for (const auto& [e, b] : cls) {
        if (v.omega_ge(a, b) && v.omega_ge(b, a)) CHECK(a == b);
        if (!v.omega_ge(a, b)) continue;
        for (const auto& [f, c] : cls) {
          auto ca = v.omega_product(c, a), cb = v.omega_product(c, b);
          if (ca && cb) CHECK(v.omega_ge(*ca, *cb));
          auto ac = v.omega_product(a, c), bc = v.omega_product(b, c);
          if (ac && bc) CHECK(v.omega_ge(*ac, *bc));
        }
      }
    }
  }
}

TEST_CASE("valuation of matrices") {
  CanonicalValuation v(m2());
  const auto x = mat("25*e11 + 1/5*e12 + 3*e22");
  CHECK(v.value(x) == v.value_of_homogeneous(0, -1));
  CHECK(v.render(v.value(x)) == "[e11]: (e11, -1)");
  std::mt19937_64 rng(43);
  for (int n = 0; n < 100; ++n) {
    GradedElement y(m2q());
    std::optional<std::int64_t> least;
    for (Index g = 0; g < 4; ++g) {
      if (rng() % 5 == 0) continue;
      const mpq_class c = oracle::random_rational(rng);
      y.set(g, Scalar(m2q()->field(), c));
      const auto w = oracle::padic(c, 5);
      if (!least || w < *least) least = w;
    }
    if (!least) continue;
    CHECK(v.value(y) == v.value_of_homogeneous(0, *least));
  }
}

TEST_CASE("values of full matrices in the triangular ring") {
  CanonicalValuation v(gvalex());
  // a = 5, b = 1: every full matrix is valued at its e21 entry.
  const auto baab = mat("e11 + 5*e12 + e21 + e22"), abaa = mat("5*e11 + e12 + 5*e21 + 5*e22");
  const auto abbb = mat("5*e11 + e12 + e21 + e22"), bbba = mat("e11 + e12 + e21 + 5*e22");
  CHECK(v.value(baab) == v.value_of_homogeneous(2, 0));
  CHECK(v.value(abaa) == v.value_of_homogeneous(2, 1));
  CHECK(v.gt(v.value(abaa), v.value(baab)));
  CHECK(v.value(abbb) == v.value(bbba));
  CHECK(v.value(abbb) == v.value_of_homogeneous(2, 0));
  const auto diag = mat("e11 + e22");
  CHECK(v.render(v.value(diag)) == "[e11]: (e11, 0) + [e22]: (e22, 0)");
}

TEST_CASE("recovering the ring from its valuation") {
  for (const auto& r : {m2(), gvalex(), oracle::corpus("quaternion").subring.value(),
                        oracle::corpus("twisted-padic").subring.value()}) {
    CanonicalValuation v(r);
    auto [t, s] = recover_rings(v);
    CHECK(t.same_bounds(r));
    CHECK(s.same_bounds(r));
  }
  const auto sc = oracle::corpus("delta2-order");
  OrderedGroupoidValuation v(sc.q, *sc.order);
  auto [t, s] = recover_rings(v);
  CHECK(t.bounds() == std::vector<ExtInt>{0, NI, PI, 0});
  CHECK(s.bounds() == std::vector<ExtInt>{0, PI, NI, 0});
}

TEST_CASE("axioms") {
  AxiomOptions opt;
  opt.random_triples = 300;
  for (const auto& r : {m2(), oracle::corpus("quaternion").subring.value(), oracle::corpus("twisted-padic").subring.value()}) {
    auto rep = check_axioms(CanonicalValuation(r), opt);
    for (const auto& c : rep.checks) CHECK_MESSAGE(c.pass, c.name, ": ", c.witnesses.empty() ? "" : c.witnesses[0]);
  }
  // Two incomparable idempotent classes: homogeneous canonicity holds, sums break it.
  auto rep = check_axioms(CanonicalValuation(gvalex()), opt);
  for (const auto& c : rep.checks) {
    if (c.name == "canonical-sums") {
      CHECK_FALSE(c.pass);
      CHECK_FALSE(c.witnesses.empty());
    } else {
      CHECK_MESSAGE(c.pass, c.name);
    }
  }
}

TEST_CASE("axiom checks see injected faults") {
  AxiomOptions opt;
  opt.random_triples = 50;
  CanonicalValuation v(m2());
  v.drop_comparability(v.omega(0, 1), v.omega(0, 0));
  auto rep = check_axioms(v, opt);
  const auto& ultra = rep.checks[1];
  REQUIRE(ultra.name == "ultrametric");
  CHECK_FALSE(ultra.pass);
  REQUIRE_FALSE(ultra.witnesses.empty());
  CHECK(ultra.witnesses[0].find("e11") != std::string::npos);

  const auto h = oracle::corpus("quaternion");
  Twist t = h.q->twist();
  const auto& g = h.q->groupoid();
  t.set_alpha(g.index_of("j"), g.index_of("i"), Scalar::one(h.q->field()));
  const auto broken = GSkewfield::create_unchecked(h.q->field(), g, t);
  auto rb = check_axioms(CanonicalValuation(BoundPattern::subring(broken, h.subring->bounds())), opt);
  bool caught = false;
  for (const auto& c : rb.checks) caught = caught || (c.name == "associative" && !c.pass && !c.witnesses.empty());
  CHECK(caught);
}

TEST_CASE("positives and values") {
  for (const auto& r : {m2(), gvalex(), oracle::corpus("quaternion").subring.value()}) {
    auto cmp = positives_agree(CanonicalValuation(r), r, 6);
    CHECK(cmp.equal);
    CHECK(cmp.cases > 0);
  }
  const auto whole = BoundPattern::subring(m2q(), {NI, NI, NI, NI});
  CHECK(positives_agree(CanonicalValuation(whole), whole, 6).equal);
  const auto mutated = BoundPattern::subring(m2q(), {0, 0, -1, 0});
  auto bad = positives_agree(CanonicalValuation(m2()), mutated, 6);
  CHECK_FALSE(bad.equal);
  CHECK_FALSE(bad.witnesses.empty());
}

TEST_CASE("equivalence of valuations") {
  CanonicalValuation v(m2());
  CanonicalValuation scaled(m2());
  scaled.set_offset_scale(2);
  auto e = equivalent(v, scaled);
  CHECK(e.equivalent);
  CHECK(e.map_consistent);
  CHECK(equivalent(v, v).equivalent);
  CHECK_FALSE(equivalent(v, CanonicalValuation(gvalex())).equivalent);
}

TEST_CASE("conjugated rings") {
  std::mt19937_64 rng(47);
  ConjugateRing same(m2(), GradedElement::one(m2q()));
  for (int n = 0; n < 100; ++n) {
    const auto y = random_element(m2q(), rng);
    CHECK(same.contains(y) == m2().contains(y));
  }
  const auto q = mat("e11 + e12 + e22");
  ConjugateRing c(m2(), q);
  const oracle::Mat qm = oracle::to_matrix(q, 2), qi = oracle::to_matrix(mat("e11 - e12 + e22"), 2);
  CHECK(oracle::mat_mul(qm, qi) == oracle::to_matrix(GradedElement::one(m2q()), 2));
  for (int n = 0; n < 200; ++n) {
    const auto y = random_element(m2q(), rng);
    const auto back = oracle::mat_mul(oracle::mat_mul(qi, oracle::to_matrix(y, 2)), qm);
    bool inside = true;
    for (const auto& row : back) {
      for (const auto& s : row) inside = inside && valuate(s) >= ExtInt(0);
    }
    CHECK(c.contains(y) == inside);
  }
  CHECK(c.is_g_total());
  CHECK(c.is_g_stable());
  CHECK_THROWS_AS(ConjugateRing(m2(), mat("e11")), Error);
}

TEST_CASE("Dubrovin rings") {
  auto rep = dubrovin_check(m2());
  CHECK(rep.residue_simple_artinian);
  CHECK(rep.residue_support == 4);
  CHECK(rep.gamma_is_group);
  const auto m = positives(m2()).ideal;
  const auto x = mat("1/5*e11 + e22");
  auto w = dubrovin_witness(m2(), x);
  CHECK(w.verified);
  CHECK(m2().contains(x * w.r_prime));
  CHECK_FALSE(m.contains(x * w.r_prime));
  CHECK(m2().contains(w.r * x));
  CHECK_FALSE(m.contains(w.r * x));

  const auto m3 = oracle::corpus("m3-full").subring.value();
  CHECK(dubrovin_check(m3).residue_simple_artinian);
  const auto m3m = positives(m3).ideal;
  std::mt19937_64 rng(53);
  for (int n = 0; n < 50; ++n) {
    const auto y = random_nonmember(m3, rng);
    REQUIRE_FALSE(m3.contains(y));
    auto wy = dubrovin_witness(m3, y);
    CHECK(wy.verified);
    CHECK(m3.contains(y * wy.r_prime));
    CHECK_FALSE(m3m.contains(y * wy.r_prime));
  }

  try {
    (void)dubrovin_check(gvalex());
    FAIL("expected HypothesisViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HypothesisViolation);
  }
  CHECK_THROWS_AS(CanonicalValuation(BoundPattern::subring(m2q(), {0, 0, 0, 1})), Error);
}
