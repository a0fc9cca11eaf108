#include <doctest.h>

#include "gradval/error.hpp"
#include "gradval/groupoid.hpp"
#include "support/oracles.hpp"

using namespace gradval;

namespace {

void check_laws(const Groupoid& g) {
  for (Index a = 0; a < g.size(); ++a) {
    CHECK(g.mult(g.source(a), a) == a);
    CHECK(g.mult(a, g.target(a)) == a);
    CHECK(g.inverse(g.inverse(a)) == a);
    for (Index b = 0; b < g.size(); ++b) {
      CHECK(g.mult(a, b).has_value() == (g.target(a) == g.source(b)));
      for (Index c = 0; c < g.size(); ++c) {
        auto ab = g.mult(a, b), bc = g.mult(b, c);
        if (ab && bc) CHECK(g.mult(*ab, c) == g.mult(a, *bc));
      }
    }
  }
  for (Index a = 0; a < g.size(); ++a) CHECK(g.is_idempotent(a) == (g.mult(a, a) == a));
}

}  // namespace

TEST_CASE("delta") {
  const Groupoid d3 = delta(3);
  CHECK(d3.size() == 9);
  CHECK(d3.mult(d3.index_of("e12"), d3.index_of("e23")) == d3.index_of("e13"));
  CHECK_FALSE(d3.mult(d3.index_of("e12"), d3.index_of("e13")).has_value());
  const Groupoid d2 = delta(2);
  CHECK(d2.idempotents() == std::vector<Index>{d2.index_of("e11"), d2.index_of("e22")});
  const Index e12 = d2.index_of("e12");
  CHECK(d2.source(e12) == d2.index_of("e11"));
  CHECK(d2.target(e12) == d2.index_of("e22"));
  check_laws(d3);
  check_laws(delta(1));
}

TEST_CASE("group times delta") {
  const Groupoid g = product_with_delta(cyclic_group(2), 2);
  CHECK(g.mult(g.index_of("(1,e12)"), g.index_of("(1,e21)")) == g.index_of("(0,e11)"));
  CHECK_THROWS_AS(g.index_of("(1,e13)"), Error);
  check_laws(g);
  const Groupoid trivial = product_with_delta(cyclic_group(1), 3);
  const Groupoid d3 = delta(3);
  CHECK(trivial.size() == d3.size());
  for (Index a = 0; a < d3.size(); ++a) {
    for (Index b = 0; b < d3.size(); ++b) CHECK(trivial.mult(a, b).has_value() == d3.mult(a, b).has_value());
  }
  check_laws(group_groupoid(klein_four_group()));
}

TEST_CASE("connected components match the closure oracle") {
  CHECK(connected_components(delta(2)).classes.size() == 1);
  CHECK(connected_components(disjoint_union({delta(1), delta(2)}, {"a.", "b."})).classes.size() == 2);
  CHECK(connected_components(product_with_delta(cyclic_group(2), 2)).classes.size() == 1);
  for (const Groupoid& g : {delta(3), disjoint_union({delta(2), delta(1), delta(2)}, {"a", "b", "c"}),
                            product_with_delta(klein_four_group(), 2), group_groupoid(cyclic_group(5))}) {
    const auto part = connected_components(g);
    const auto brute = oracle::brute_components(g);
    for (Index a = 0; a < g.size(); ++a) {
      for (Index b = 0; b < g.size(); ++b) CHECK((part.class_of[a] == part.class_of[b]) == (brute[a] == brute[b]));
    }
  }
}

TEST_CASE("quotients") {
  const Groupoid z4 = group_groupoid(cyclic_group(4));
  const std::vector<Index> f{z4.index_of("0"), z4.index_of("2")};
  const auto q = quotient(z4, f);
  CHECK(q.groupoid.size() == 2);
  for (Index a = 0; a < z4.size(); ++a) {
    for (Index b = 0; b < z4.size(); ++b) {
      auto ab = z4.mult(a, b);
      if (ab) CHECK(q.groupoid.mult(q.projection[a], q.projection[b]) == q.projection[*ab]);
    }
  }
  const Groupoid d2 = delta(2);
  CHECK(quotient(d2, d2.idempotents()).groupoid.size() == 4);

  const Groupoid g = product_with_delta(cyclic_group(2), 2);
  const std::vector<Index> iso{g.index_of("(0,e11)"), g.index_of("(0,e22)"), g.index_of("(1,e11)"),
                               g.index_of("(1,e22)")};
  const auto gq = quotient(g, iso);
  CHECK(gq.groupoid.size() == 4);
  CHECK(connected_components(gq.groupoid).classes.size() == 1);
  for (Index a = 0; a < g.size(); ++a) {
    for (Index b = 0; b < g.size(); ++b) {
      auto ab = g.mult(a, b);
      if (ab) CHECK(gq.groupoid.mult(gq.projection[a], gq.projection[b]) == gq.projection[*ab]);
    }
  }

  try {
    (void)quotient(d2, std::vector<Index>{d2.index_of("e11")});
    FAIL("missing idempotent accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSubgroupoid);
  }
}

TEST_CASE("order validation") {
  const Groupoid d2 = delta(2);
  auto idx = [&](const char* n) { return d2.index_of(n); };
  GroupoidOrder o(d2);
  o.add(idx("e22"), idx("e12"));
  o.add(idx("e22"), idx("e21"));
  o.add(idx("e12"), idx("e11"));
  o.add(idx("e21"), idx("e11"));
  o.close();
  auto r = validate_order(o);
  CHECK(r.partial_order);
  CHECK(r.compatible);
  CHECK(r.ordered);
  CHECK_FALSE(o.le(idx("e12"), idx("e21")));

  GroupoidOrder flat(d2);
  flat.close();
  CHECK_FALSE(validate_order(flat).ordered);

  GroupoidOrder gap(d2);
  gap.add(idx("e12"), idx("e11"));
  gap.close();
  auto rg = validate_order(gap);
  CHECK_FALSE(rg.compatible);
  CHECK_FALSE(rg.witnesses.empty());
}
