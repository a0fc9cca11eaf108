#include <doctest.h>

#include <random>

#include "gradval/error.hpp"
#include "gradval/pattern.hpp"
#include "gradval/value.hpp"
#include "support/oracles.hpp"

using namespace gradval;

namespace {

const ExtInt NI = ExtInt::neg_inf();
const ExtInt PI = ExtInt::pos_inf();

QPtr plain(const FieldDescriptor& f, Groupoid g) {
  Twist t(g, f);
  return GSkewfield::create(f, std::move(g), std::move(t));
}

QPtr m2q() {
  static const QPtr q = plain(FieldDescriptor::padic_rationals(5), delta(2));
  return q;
}

BoundPattern m2() { return BoundPattern::subring(m2q(), {0, 0, 0, 0}); }
BoundPattern gvalex() { return BoundPattern::subring(m2q(), {0, NI, PI, 0}); }

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::ValidationError;
}

}  // namespace

TEST_CASE("pattern validation") {
  CHECK(validate_pattern(m2()).pass);
  CHECK(validate_pattern(gvalex()).pass);
  auto bad = validate_pattern(BoundPattern::subring(m2q(), {0, -1, -1, 0}));
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.witnesses.empty());
}

TEST_CASE("canonical bounds under the trivial valuation") {
  const auto f = FieldDescriptor::rationals();
  CHECK(canonical_bound(f, ExtInt(-3)) == ExtInt(0));
  CHECK(canonical_bound(f, NI) == ExtInt(0));
  CHECK(canonical_bound(f, ExtInt(2)) == PI);
  CHECK(successor_bound(f, ExtInt(0)) == PI);
  const auto p = FieldDescriptor::padic_rationals(5);
  CHECK(canonical_bound(p, ExtInt(-3)) == ExtInt(-3));
  CHECK(successor_bound(p, ExtInt(-3)) == ExtInt(-2));
}

TEST_CASE("totality and stability on the worked patterns") {
  for (const auto& r : {m2(), gvalex()}) {
    CHECK(is_g_total(r));
    CHECK(is_g_stable(r));
    CHECK(is_g_valuation_ring(r));
    CHECK(oracle::scan_total(r, 6));
    CHECK(oracle::scan_stable(r, 6));
  }
  // (R_v k; 0 k): conjugating by u_e12 carries k onto R_v.
  const auto r = BoundPattern::subring(m2q(), {0, NI, PI, NI});
  REQUIRE(validate_pattern(r).pass);
  CHECK(is_g_total(r));
  CHECK(oracle::scan_total(r, 6));
  CHECK_FALSE(is_g_stable(r));
  std::string witness;
  CHECK_FALSE(oracle::scan_stable(r, 6, &witness));
  CHECK_FALSE(witness.empty());
  const auto ideal = BoundPattern::ideal(m2(), {1, 1, 1, 1}, PatternKind::TwoSidedIdeal);
  CHECK(code_of([&] { (void)is_g_total(ideal); }) == ErrorCode::KindMismatch);
}

TEST_CASE("closed forms agree with the literal scans on random patterns") {
  const auto p5 = FieldDescriptor::padic_rationals(5);
  Groupoid d2 = delta(2);
  Twist tw(d2, p5);
  tw.set_alpha(d2.index_of("e12"), d2.index_of("e21"), Scalar::integer(p5, 5));
  tw.set_alpha(d2.index_of("e21"), d2.index_of("e12"), Scalar::integer(p5, 5));
  const std::vector<QPtr> rings{plain(p5, delta(2)), GSkewfield::create(p5, d2, tw), plain(p5, delta(3)),
                                plain(p5, product_with_delta(cyclic_group(2), 2)),
                                plain(p5, group_groupoid(klein_four_group())),
                                plain(FieldDescriptor::rationals(), delta(2))};
  std::mt19937_64 rng(17);
  for (const auto& q : rings) {
    int total = 0, stable = 0;
    for (int n = 0; n < 40; ++n) {
      const auto r = oracle::random_subring(q, rng);
      std::string w;
      const bool t = is_g_total(r), s = is_g_stable(r);
      CHECK_MESSAGE(t == oracle::scan_total(r, 6, &w), r.to_string(), " ", w);
      CHECK_MESSAGE(s == oracle::scan_stable(r, 6, &w), r.to_string(), " ", w);
      total += t;
      stable += s;
    }
    // Both answers occur, so the comparison is not vacuous.
    CHECK(total > 0);
    CHECK(stable > 0);
  }
}

TEST_CASE("membership is closed under the ring operations") {
  std::mt19937_64 rng(23);
  for (const auto& r : {m2(), gvalex(), BoundPattern::subring(m2q(), {0, -2, 2, 0}),
                        oracle::corpus("quaternion").subring.value()}) {
    for (int n = 0; n < 500; ++n) {
      const auto x = random_member(r, rng), y = random_member(r, rng);
      REQUIRE(r.contains(x));
      REQUIRE(r.contains(y));
      CHECK(r.contains(x + y));
      CHECK(r.contains(x * y));
    }
  }
}

TEST_CASE("ideal comparison") {
  const auto ring = gvalex();
  const auto i = BoundPattern::ideal(ring, {1, NI, PI, 0}, PatternKind::TwoSidedIdeal);
  const auto j = BoundPattern::ideal(ring, {0, NI, PI, 1}, PatternKind::TwoSidedIdeal);
  REQUIRE(validate_pattern(i).pass);
  REQUIRE(validate_pattern(j).pass);
  auto c = ideal_compare(i, j);
  CHECK(c.relation == Relation::Incomparable);
  CHECK(c.i_not_in_j == std::vector<Index>{3});
  CHECK(c.j_not_in_i == std::vector<Index>{0});
  CHECK(ideal_compare(i, i).relation == Relation::Equal);
  const auto a = BoundPattern::ideal(m2(), {1, 1, 1, 1}, PatternKind::TwoSidedIdeal);
  const auto b = BoundPattern::ideal(m2(), {2, 2, 2, 2}, PatternKind::TwoSidedIdeal);
  CHECK(ideal_compare(b, a).relation == Relation::Less);
  CHECK(ideal_compare(a, b).relation == Relation::Greater);
}

TEST_CASE("comparability of left ideals in a G-total ring") {
  std::mt19937_64 rng(31);
  for (const auto& ring : {m2(), gvalex(), BoundPattern::subring(m2q(), {0, -1, 1, 0})}) {
    REQUIRE(is_g_total(ring));
    const auto& g = ring.parent()->groupoid();
    std::vector<BoundPattern> ideals;
    for (int n = 0; n < 12; ++n) {
      ideals.push_back(generated_ideal(ring, {random_member(ring, rng, 0.3)}, Side::Left));
    }
    for (const auto& i : ideals) {
      for (const auto& j : ideals) {
        for (Index x = 0; x < g.size(); ++x) {
          if (j.bound(x) >= i.bound(x)) continue;  // J_x inside I_x
          for (Index y = 0; y < g.size(); ++y) {
            if (g.target(y) == g.target(x)) CHECK(i.bound(y) >= j.bound(y));
          }
        }
      }
    }
  }
}

TEST_CASE("one-sided closures over a stable group-graded ring are two-sided") {
  std::mt19937_64 rng(37);
  const auto f = FieldDescriptor::padic_rationals(5);
  const auto klein = plain(f, group_groupoid(klein_four_group()));
  for (const auto& ring : {oracle::corpus("quaternion").subring.value(), BoundPattern::subring(klein, {0, 0, 1, 1})}) {
    REQUIRE(validate_pattern(ring).pass);
    REQUIRE(is_g_stable(ring));
    for (int n = 0; n < 30; ++n) {
      const auto h = random_member(ring, rng, 0.3);
      std::vector<ExtInt> start(ring.size(), PI);
      for (const auto& [g, c] : h.coefficients()) start[g] = valuate(c);
      const auto right = close_bounds(ring, start, Side::Right);
      CHECK(close_bounds(ring, right, Side::Left) == right);
      const auto left = close_bounds(ring, start, Side::Left);
      CHECK(close_bounds(ring, left, Side::Right) == left);
    }
  }
}

TEST_CASE("over Delta_2 a right ideal of a stable ring need not be a left ideal") {
  // The first row e11 R of M_2(Z_(5)): u_e21 u_e11 = u_e21 leaves it.
  REQUIRE(is_g_stable(m2()));
  std::vector<ExtInt> start{0, PI, PI, PI};
  const auto row = close_bounds(m2(), start, Side::Right);
  CHECK(row == std::vector<ExtInt>{0, 0, PI, PI});
  CHECK(close_bounds(m2(), row, Side::Left) == std::vector<ExtInt>{0, 0, 0, 0});
  const auto q = m2q();
  CHECK_FALSE(BoundPattern::ideal(m2(), row, PatternKind::RightIdeal)
                  .contains(GradedElement::parse(q, "e21") * GradedElement::parse(q, "e11")));
}

TEST_CASE("cyclic ideals") {
  const auto ring = gvalex();
  const auto q = ring.parent();
  const auto e = generated_ideal(ring, {GradedElement::parse(q, "e11"), GradedElement::parse(q, "e22")}, Side::TwoSided);
  CHECK_FALSE(is_cyclic(e, Side::TwoSided, 6).has_value());
  const auto left = generated_ideal(m2(), {GradedElement::parse(q, "e11"), GradedElement::parse(q, "e21")}, Side::Left);
  auto gen = is_cyclic(left, Side::Left, 6);
  REQUIRE(gen.has_value());
  CHECK(principal_ideal(m2(), *gen, Side::Left).same_bounds(left));
  CHECK(principal_ideal(m2(), GradedElement::one(q), Side::TwoSided).same_bounds(m2()));
  CHECK(code_of([&] { (void)principal_ideal(m2(), GradedElement::parse(q, "1/5*e12"), Side::Left); }) ==
        ErrorCode::NotMember);
}

TEST_CASE("positives") {
  auto pg = positives(gvalex());
  CHECK(pg.ideal.bounds() == std::vector<ExtInt>{1, NI, PI, 1});
  auto pm = positives(m2());
  CHECK(pm.ideal.bounds() == std::vector<ExtInt>{1, 1, 1, 1});
  auto whole = positives(BoundPattern::subring(m2q(), {NI, NI, NI, NI}));
  CHECK(whole.ideal.bounds() == std::vector<ExtInt>{PI, PI, PI, PI});
  for (const auto& r : {gvalex(), m2(), BoundPattern::subring(m2q(), {0, -2, 2, 0}),
                        oracle::corpus("quaternion").subring.value(), oracle::corpus("twisted-padic").subring.value()}) {
    const auto p = positives(r);
    for (Index g = 0; g < r.size(); ++g) {
      // A least value at the bottom of the window means no least value.
      ExtInt scan = oracle::scan_positive_generator(r, g, 6);
      if (scan == ExtInt(-6)) scan = NI;
      CHECK_MESSAGE(p.generators[g] == scan, r.to_string(), " at ", g);
    }
  }
  const auto not_total = BoundPattern::subring(m2q(), {0, 1, 1, 0});
  REQUIRE(validate_pattern(not_total).pass);
  REQUIRE_FALSE(is_g_total(not_total));
  CHECK(code_of([&] { (void)positives(not_total); }) == ErrorCode::NotTotal);
}

TEST_CASE("residue G-skewfields") {
  auto rm = residue_skewfield(m2());
  CHECK(rm.support.size() == 4);
  CHECK(rm.skewfield->field() == FieldDescriptor::prime_field(5));
  CHECK(is_g_skewfield(*rm.skewfield));
  CHECK(is_g_simple(*rm.skewfield));
  CHECK(rm.reduce(m2(), 0, Scalar::integer(m2q()->field(), 7)).coefficient(0) ==
        Scalar::integer(FieldDescriptor::prime_field(5), 2));

  auto rg = residue_skewfield(gvalex());
  CHECK(rg.support == std::vector<Index>{0, 3});
  CHECK(is_g_skewfield(*rg.skewfield));
  CHECK_FALSE(is_g_simple(*rg.skewfield));

  const auto quat = oracle::corpus("quaternion").subring.value();
  auto rq = residue_skewfield(quat);
  CHECK(rq.support.size() == 4);
  CHECK(rq.skewfield->field() == FieldDescriptor::prime_field(3));
  CHECK(is_g_skewfield(*rq.skewfield));
  const auto& g = rq.skewfield->groupoid();
  const auto i = GradedElement::unit(rq.skewfield, g.index_of("i"));
  CHECK(i * i == Scalar::integer(rq.skewfield->field(), -1) * GradedElement::one(rq.skewfield));
}

TEST_CASE("strong gradings and the component ideal correspondence") {
  CHECK(is_strongly_graded(m2()));
  CHECK_FALSE(is_strongly_graded(gvalex()));
  const auto ext = extend_component_ideals(m2(), {{0, ExtInt(2)}});
  CHECK(ext.bounds() == std::vector<ExtInt>{2, 2, 2, 2});
  CHECK(restrict_component_ideals(ext) == std::map<Index, ExtInt>{{0, ExtInt(2)}});
  CHECK(extend_component_ideals(m2(), {{0, ExtInt(0)}}).same_bounds(m2()));
  CHECK(g_jacobson_radical(m2()).same_bounds(positives(m2()).ideal));
  CHECK(code_of([&] { (void)extend_component_ideals(gvalex(), {{0, ExtInt(1)}}); }) == ErrorCode::NotStrong);
}
