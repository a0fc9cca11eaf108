#include "gradval/groupoid.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "gradval/error.hpp"

namespace gradval {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

Error invalid(const std::string& what) { return Error(ErrorCode::ValidationError, what); }

}  // namespace

Groupoid Groupoid::from_table(std::vector<std::string> names,
                              const std::vector<std::vector<std::optional<Index>>>& table) {
  const std::size_t n = names.size();
  if (n == 0) throw invalid("groupoid has no elements");
  if (n > kMaxElements) {
    throw Error(ErrorCode::TooLarge, std::to_string(n) + " elements exceeds the cap of " +
                                         std::to_string(kMaxElements));
  }
  if (table.size() != n) throw invalid("multiplication table has the wrong number of rows");

  Groupoid g;
  g.names_ = std::move(names);
  for (Index i = 0; i < n; ++i) {
    if (!g.by_name_.emplace(g.names_[i], i).second) {
      throw invalid("duplicate element name '" + g.names_[i] + "'");
    }
  }
  g.table_.assign(n * n, std::nullopt);
  for (Index a = 0; a < n; ++a) {
    if (table[a].size() != n) throw invalid("multiplication table row has the wrong length");
    for (Index b = 0; b < n; ++b) {
      if (table[a][b] && *table[a][b] >= n) throw invalid("product index out of range");
      g.table_[a * n + b] = table[a][b];
    }
  }
  for (Index a = 0; a < n; ++a) {
    if (g.mult(a, a) == a) g.idempotents_.push_back(a);
  }
  if (g.idempotents_.empty()) throw invalid("no idempotents");
  auto idem = [&](std::optional<Index> x) { return x && g.mult(*x, *x) == *x; };

  g.inverse_.assign(n, n);
  g.source_.assign(n, n);
  g.target_.assign(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      auto ab = g.mult(a, b);
      auto ba = g.mult(b, a);
      if (idem(ab) && idem(ba) && g.mult(*ab, a) == a && g.mult(a, *ba) == a) {
        if (g.inverse_[a] != n) throw invalid("element '" + g.names_[a] + "' has two inverses");
        g.inverse_[a] = b;
        g.source_[a] = *ab;
        g.target_[a] = *ba;
      }
    }
    if (g.inverse_[a] == n) throw invalid("element '" + g.names_[a] + "' has no inverse");
  }
  for (Index a = 0; a < n; ++a) {
    if (g.inverse_[g.inverse_[a]] != a) throw invalid("inverse is not an involution at '" + g.names_[a] + "'");
    for (Index b = 0; b < n; ++b) {
      bool defined = g.mult(a, b).has_value();
      if (defined != (g.target_[a] == g.source_[b])) {
        throw invalid("product " + g.names_[a] + "*" + g.names_[b] +
                      (defined ? " is defined although t != s" : " is undefined although t = s"));
      }
    }
  }
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      auto ab = g.mult(a, b);
      if (!ab) continue;
      for (Index c = 0; c < n; ++c) {
        auto bc = g.mult(b, c);
        if (!bc) continue;
        auto left = g.mult(*ab, c);
        auto right = g.mult(a, *bc);
        if (!left || !right || *left != *right) {
          throw invalid("associativity fails on (" + g.names_[a] + ", " + g.names_[b] + ", " +
                        g.names_[c] + ")");
        }
      }
    }
  }
  return g;
}

Groupoid::Index Groupoid::index_of(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw Error(ErrorCode::UnknownElement, "no groupoid element '" + name + "'");
  return it->second;
}

std::optional<Groupoid::Index> Groupoid::find(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::vector<Groupoid::Index> Groupoid::isotropy(Index e) const {
  std::vector<Index> out;
  for (Index g = 0; g < size(); ++g) {
    if (source_[g] == e && target_[g] == e) out.push_back(g);
  }
  return out;
}

void FiniteGroup::validate() const {
  const std::size_t n = size();
  if (n == 0 || table.size() != n) throw invalid("group table has the wrong shape");
  for (const auto& row : table) {
    if (row.size() != n) throw invalid("group table has the wrong shape");
    for (auto x : row) {
      if (x >= n) throw invalid("group table entry out of range");
    }
  }
  std::optional<std::size_t> identity;
  for (std::size_t e = 0; e < n && !identity; ++e) {
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a) ok = table[e][a] == a && table[a][e] == a;
    if (ok) identity = e;
  }
  if (!identity) throw invalid("group table has no identity");
  for (std::size_t a = 0; a < n; ++a) {
    bool has_inverse = false;
    for (std::size_t b = 0; b < n && !has_inverse; ++b) has_inverse = table[a][b] == *identity;
    if (!has_inverse) throw invalid("group element '" + names[a] + "' has no inverse");
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        if (table[table[a][b]][c] != table[a][table[b][c]]) {
          throw invalid("group law is not associative on (" + names[a] + ", " + names[b] + ", " +
                        names[c] + ")");
        }
      }
    }
  }
}

FiniteGroup cyclic_group(std::size_t order) {
  FiniteGroup grp;
  for (std::size_t i = 0; i < order; ++i) grp.names.push_back(std::to_string(i));
  grp.table.assign(order, std::vector<std::size_t>(order));
  for (std::size_t a = 0; a < order; ++a) {
    for (std::size_t b = 0; b < order; ++b) grp.table[a][b] = (a + b) % order;
  }
  return grp;
}

FiniteGroup klein_four_group() {
  FiniteGroup grp;
  grp.names = {"1", "i", "j", "k"};
  grp.table.assign(4, std::vector<std::size_t>(4));
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) grp.table[a][b] = a ^ b;
  }
  return grp;
}

Groupoid delta(std::size_t n) { return product_with_delta(cyclic_group(1), n); }

Groupoid group_groupoid(const FiniteGroup& group) {
  group.validate();
  const std::size_t n = group.size();
  std::vector<std::vector<std::optional<Groupoid::Index>>> table(
      n, std::vector<std::optional<Groupoid::Index>>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) table[a][b] = group.table[a][b];
  }
  return Groupoid::from_table(group.names, table);
}

Groupoid product_with_delta(const FiniteGroup& group, std::size_t n) {
  group.validate();
  if (n == 0) throw invalid("Delta_n needs n >= 1");
  const std::size_t h = group.size();
  if (h * n * n > Groupoid::kMaxElements) {
    throw Error(ErrorCode::TooLarge, "H[Delta_n] exceeds the element cap");
  }
  auto unit_name = [n](std::size_t i, std::size_t j) {
    if (n <= 9) return "e" + std::to_string(i + 1) + std::to_string(j + 1);
    return "e" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
  };
  // index = (g * n + i) * n + j
  std::vector<std::string> names;
  for (std::size_t g = 0; g < h; ++g) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        names.push_back(h == 1 ? unit_name(i, j) : "(" + group.names[g] + "," + unit_name(i, j) + ")");
      }
    }
  }
  const std::size_t size = names.size();
  std::vector<std::vector<std::optional<Groupoid::Index>>> table(
      size, std::vector<std::optional<Groupoid::Index>>(size));
  for (std::size_t a = 0; a < size; ++a) {
    std::size_t ga = a / (n * n), ia = (a / n) % n, ja = a % n;
    for (std::size_t b = 0; b < size; ++b) {
      std::size_t gb = b / (n * n), ib = (b / n) % n, jb = b % n;
      if (ja == ib) table[a][b] = (group.table[ga][gb] * n + ia) * n + jb;
    }
  }
  return Groupoid::from_table(std::move(names), table);
}

Groupoid disjoint_union(const std::vector<Groupoid>& parts, const std::vector<std::string>& prefixes) {
  if (parts.size() != prefixes.size()) throw invalid("one prefix per part is required");
  std::vector<std::string> names;
  std::vector<std::size_t> offsets;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    offsets.push_back(names.size());
    for (const auto& nm : parts[p].names()) names.push_back(prefixes[p] + nm);
  }
  const std::size_t size = names.size();
  std::vector<std::vector<std::optional<Groupoid::Index>>> table(
      size, std::vector<std::optional<Groupoid::Index>>(size));
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const Groupoid& part = parts[p];
    for (std::size_t a = 0; a < part.size(); ++a) {
      for (std::size_t b = 0; b < part.size(); ++b) {
        if (auto ab = part.mult(a, b)) table[offsets[p] + a][offsets[p] + b] = offsets[p] + *ab;
      }
    }
  }
  return Groupoid::from_table(std::move(names), table);
}

ConnectedPartition connected_components(const Groupoid& g) {
  UnionFind uf(g.size());
  for (Groupoid::Index a = 0; a < g.size(); ++a) {
    uf.unite(a, g.source(a));
    uf.unite(a, g.target(a));
  }
  ConnectedPartition out;
  out.class_of.assign(g.size(), 0);
  std::vector<std::size_t> class_of_root(g.size(), g.size());
  for (Groupoid::Index a = 0; a < g.size(); ++a) {
    std::size_t root = uf.find(a);
    if (class_of_root[root] == g.size()) {
      class_of_root[root] = out.classes.size();
      out.classes.emplace_back();
    }
    out.class_of[a] = class_of_root[root];
    out.classes[class_of_root[root]].push_back(a);
  }
  return out;
}

QuotientGroupoid quotient(const Groupoid& g, std::span<const Groupoid::Index> subgroupoid) {
  const std::size_t n = g.size();
  std::vector<bool> in_f(n, false);
  for (auto f : subgroupoid) {
    if (f >= n) throw Error(ErrorCode::NotSubgroupoid, "index out of range");
    in_f[f] = true;
  }
  for (auto e : g.idempotents()) {
    if (!in_f[e]) throw Error(ErrorCode::NotSubgroupoid, "missing idempotent " + g.name(e));
  }
  for (Groupoid::Index a = 0; a < n; ++a) {
    if (!in_f[a]) continue;
    if (!in_f[g.inverse(a)]) throw Error(ErrorCode::NotSubgroupoid, "not closed under inverse at " + g.name(a));
    for (Groupoid::Index b = 0; b < n; ++b) {
      if (!in_f[b]) continue;
      if (auto ab = g.mult(a, b); ab && !in_f[*ab]) {
        throw Error(ErrorCode::NotSubgroupoid,
                    "not closed: " + g.name(a) + "*" + g.name(b) + " = " + g.name(*ab));
      }
    }
  }
  // g F_{t(g)} g^-1 = F_{s(g)}, with F_e the isotropy part of F at e.
  for (Groupoid::Index a = 0; a < n; ++a) {
    std::set<Groupoid::Index> conj, local;
    for (Groupoid::Index f = 0; f < n; ++f) {
      if (!in_f[f]) continue;
      if (g.source(f) == g.target(a) && g.target(f) == g.target(a)) {
        conj.insert(*g.mult(*g.mult(a, f), g.inverse(a)));
      }
      if (g.source(f) == g.source(a) && g.target(f) == g.source(a)) local.insert(f);
    }
    if (conj != local) throw Error(ErrorCode::NormalityViolation, "conjugation by " + g.name(a));
  }

  UnionFind uf(n);
  for (Groupoid::Index h = 0; h < n; ++h) {
    for (Groupoid::Index fs = 0; fs < n; ++fs) {
      if (!in_f[fs] || g.target(fs) != g.source(h)) continue;
      Groupoid::Index left = *g.mult(fs, h);
      for (Groupoid::Index ft = 0; ft < n; ++ft) {
        if (!in_f[ft] || g.source(ft) != g.target(h)) continue;
        uf.unite(h, *g.mult(left, ft));
      }
    }
  }
  QuotientGroupoid out;
  out.projection.assign(n, 0);
  std::vector<Groupoid::Index> class_of_root(n, n);
  std::vector<std::string> names;
  std::vector<Groupoid::Index> reps;
  for (Groupoid::Index a = 0; a < n; ++a) {
    auto root = uf.find(a);
    if (class_of_root[root] == n) {
      class_of_root[root] = names.size();
      names.push_back("[" + g.name(a) + "]");
      reps.push_back(a);
    }
    out.projection[a] = class_of_root[root];
  }
  const std::size_t m = names.size();
  std::vector<std::vector<std::optional<Groupoid::Index>>> table(
      m, std::vector<std::optional<Groupoid::Index>>(m));
  for (Groupoid::Index a = 0; a < n; ++a) {
    for (Groupoid::Index b = 0; b < n; ++b) {
      auto ab = g.mult(a, b);
      if (!ab) continue;
      auto& slot = table[out.projection[a]][out.projection[b]];
      auto cls = out.projection[*ab];
      if (slot && *slot != cls) {
        throw Error(ErrorCode::NormalityViolation, "induced product is not well defined at " +
                                                       g.name(a) + "*" + g.name(b));
      }
      slot = cls;
    }
  }
  try {
    out.groupoid = Groupoid::from_table(std::move(names), table);
  } catch (const Error& e) {
    throw Error(ErrorCode::NormalityViolation, e.what());
  }
  return out;
}

GroupoidOrder::GroupoidOrder(Groupoid base) : base_(std::move(base)), le_(base_.size() * base_.size(), false) {}

void GroupoidOrder::add(Groupoid::Index g, Groupoid::Index h) { le_[g * base_.size() + h] = true; }

void GroupoidOrder::close() {
  const std::size_t n = base_.size();
  for (std::size_t a = 0; a < n; ++a) le_[a * n + a] = true;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t a = 0; a < n; ++a) {
      if (!le_[a * n + k]) continue;
      for (std::size_t b = 0; b < n; ++b) {
        if (le_[k * n + b]) le_[a * n + b] = true;
      }
    }
  }
}

OrderReport validate_order(const GroupoidOrder& order) {
  const Groupoid& g = order.base();
  const std::size_t n = g.size();
  OrderReport rep;
  auto nm = [&](Groupoid::Index x) { return g.name(x); };
  for (std::size_t a = 0; a < n; ++a) {
    if (!order.le(a, a)) {
      rep.partial_order = false;
      rep.witnesses.push_back("not reflexive at " + nm(a));
    }
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && order.le(a, b) && order.le(b, a)) {
        rep.partial_order = false;
        rep.witnesses.push_back("not antisymmetric: " + nm(a) + " <= " + nm(b) + " <= " + nm(a));
      }
      if (!order.le(a, b)) continue;
      for (std::size_t c = 0; c < n; ++c) {
        if (order.le(b, c) && !order.le(a, c)) {
          rep.partial_order = false;
          rep.witnesses.push_back("not transitive: " + nm(a) + " <= " + nm(b) + " <= " + nm(c));
        }
      }
      for (std::size_t h = 0; h < n; ++h) {
        auto ha = g.mult(h, a), hb = g.mult(h, b);
        if (ha && hb && !order.le(*ha, *hb)) {
          rep.compatible = false;
          rep.witnesses.push_back(nm(a) + " <= " + nm(b) + " but " + nm(h) + "*" + nm(a) + " = " +
                                  nm(*ha) + " is not <= " + nm(h) + "*" + nm(b) + " = " + nm(*hb));
        }
        auto ah = g.mult(a, h), bh = g.mult(b, h);
        if (ah && bh && !order.le(*ah, *bh)) {
          rep.compatible = false;
          rep.witnesses.push_back(nm(a) + " <= " + nm(b) + " but " + nm(a) + "*" + nm(h) + " = " +
                                  nm(*ah) + " is not <= " + nm(b) + "*" + nm(h) + " = " + nm(*bh));
        }
      }
    }
    for (auto e : {g.source(a), g.target(a)}) {
      if (!order.le(a, e) && !order.le(e, a)) {
        rep.ordered = false;
        rep.witnesses.push_back(nm(a) + " is incomparable to its unit " + nm(e));
      }
    }
  }
  return rep;
}

}  // namespace gradval
