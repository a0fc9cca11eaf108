#include "gradval/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include <toml.hpp>

#include "gradval/error.hpp"
#include "gradval/value.hpp"

namespace gradval {

using nlohmann::json;

const BoundPattern& Scenario::ideal(const std::string& name) const {
  for (const auto& [n, p] : ideals) {
    if (n == name) return p;
  }
  throw Error(ErrorCode::UnknownElement, "no ideal named '" + name + "'");
}

const GradedElement& Scenario::element(const std::string& name) const {
  for (const auto& [n, x] : elements) {
    if (n == name) return x;
  }
  throw Error(ErrorCode::UnknownElement, "no element named '" + name + "'");
}

// ---------------------------------------------------------------------------
// Loading

namespace {

class Loader {
 public:
  explicit Loader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void parse_fail(const toml::node* node, const std::string& key, const std::string& msg) const {
    std::string where = source_;
    if (node && node->source().begin.line > 0) where += ":" + std::to_string(node->source().begin.line);
    throw Error(ErrorCode::ParseError, where + ": key '" + key + "': " + msg);
  }

  [[noreturn]] void invalid(const std::string& key, const std::string& msg) const {
    throw Error(ErrorCode::ValidationError, source_ + ": [" + key + "] " + msg);
  }

  std::string str(const toml::node* node, const std::string& key) const {
    if (!node || !node->is_string()) parse_fail(node, key, "expected a string");
    return node->as_string()->get();
  }

  std::int64_t integer(const toml::node* node, const std::string& key) const {
    if (!node || !node->is_integer()) parse_fail(node, key, "expected an integer");
    return node->as_integer()->get();
  }

  ExtInt bound(const toml::node* node, const std::string& key) const {
    if (node && node->is_integer()) return ExtInt(node->as_integer()->get());
    if (node && node->is_string()) {
      auto b = ExtInt::parse(node->as_string()->get());
      if (b) return *b;
    }
    parse_fail(node, key, "expected an integer or \"+inf\"/\"-inf\"");
  }

  const toml::table* table(const toml::node* node, const std::string& key) const {
    if (!node || !node->is_table()) parse_fail(node, key, "expected a table");
    return node->as_table();
  }

  const toml::array* array(const toml::node* node, const std::string& key) const {
    if (!node || !node->is_array()) parse_fail(node, key, "expected an array");
    return node->as_array();
  }

  std::vector<std::string> strings(const toml::node* node, const std::string& key) const {
    std::vector<std::string> out;
    for (const auto& item : *array(node, key)) out.push_back(str(&item, key));
    return out;
  }

  /// Array of string tuples of the given arity.
  std::vector<std::vector<std::string>> tuples(const toml::node* node, const std::string& key, std::size_t arity) const {
    std::vector<std::vector<std::string>> out;
    for (const auto& item : *array(node, key)) {
      auto row = strings(&item, key);
      if (row.size() != arity) parse_fail(&item, key, "expected " + std::to_string(arity) + " entries");
      out.push_back(std::move(row));
    }
    return out;
  }

  void only_keys(const toml::table* t, const std::string& key, std::initializer_list<std::string_view> allowed) const {
    for (const auto& [k, v] : *t) {
      if (std::find(allowed.begin(), allowed.end(), k.str()) == allowed.end()) {
        parse_fail(&v, key + "." + std::string(k.str()), "unknown key");
      }
    }
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

json to_json(const toml::node& node) {
  if (node.is_table()) {
    json out = json::object();
    for (const auto& [k, v] : *node.as_table()) out[std::string(k.str())] = to_json(v);
    return out;
  }
  if (node.is_array()) {
    json out = json::array();
    for (const auto& v : *node.as_array()) out.push_back(to_json(v));
    return out;
  }
  if (node.is_string()) return node.as_string()->get();
  if (node.is_integer()) return node.as_integer()->get();
  if (node.is_boolean()) return node.as_boolean()->get();
  if (node.is_floating_point()) return node.as_floating_point()->get();
  return nullptr;
}

FieldDescriptor load_field(const Loader& ld, const toml::table* t) {
  ld.only_keys(t, "field", {"kind", "valuation", "prime", "radicand", "characteristic"});
  const std::string kind = t->contains("kind") ? ld.str(t->get("kind"), "field.kind") : "rationals";
  const std::string val = t->contains("valuation") ? ld.str(t->get("valuation"), "field.valuation") : "trivial";
  FieldDescriptor f;
  if (kind == "rationals") {
    if (val == "padic") {
      f = FieldDescriptor::padic_rationals(ld.integer(t->get("prime"), "field.prime"));
    } else if (val == "trivial") {
      f = FieldDescriptor::rationals();
    } else {
      ld.parse_fail(t->get("valuation"), "field.valuation", "expected \"trivial\" or \"padic\"");
    }
  } else if (kind == "quadratic") {
    f = FieldDescriptor::quadratic(ld.integer(t->get("radicand"), "field.radicand"));
    if (val != "trivial") ld.invalid("field", "quadratic fields carry the trivial valuation only");
  } else if (kind == "prime") {
    f = FieldDescriptor::prime_field(ld.integer(t->get("characteristic"), "field.characteristic"));
    if (val != "trivial") ld.invalid("field", "prime fields carry the trivial valuation only");
  } else {
    ld.parse_fail(t->get("kind"), "field.kind", "expected \"rationals\", \"quadratic\" or \"prime\"");
  }
  try {
    f.validate();
  } catch (const Error& e) {
    ld.invalid("field", e.what());
  }
  return f;
}

struct BuiltGroupoid {
  Groupoid groupoid;
  /// Group the elements project to, with the projection, for group_alpha.
  std::optional<FiniteGroup> group;
  std::vector<std::size_t> group_part;
};

FiniteGroup load_group(const Loader& ld, const toml::table* t, const std::string& key) {
  const std::string name = ld.str(t->get("group"), key + ".group");
  if (name == "klein") return klein_four_group();
  if (name == "cyclic") return cyclic_group(static_cast<std::size_t>(ld.integer(t->get("order"), key + ".order")));
  ld.parse_fail(t->get("group"), key + ".group", "expected \"klein\" or \"cyclic\"");
}

BuiltGroupoid load_groupoid(const Loader& ld, const toml::table* t, const std::string& key) {
  ld.only_keys(t, key, {"kind", "n", "group", "order", "parts", "prefixes"});
  const std::string kind = ld.str(t->get("kind"), key + ".kind");
  auto positive = [&](const char* name) {
    std::int64_t n = ld.integer(t->get(name), key + "." + name);
    if (n < 1) ld.invalid(key, std::string(name) + " must be positive");
    return static_cast<std::size_t>(n);
  };
  if (kind == "delta") return {delta(positive("n")), std::nullopt, {}};
  if (kind == "group") {
    FiniteGroup grp = load_group(ld, t, key);
    std::vector<std::size_t> part(grp.size());
    for (std::size_t i = 0; i < part.size(); ++i) part[i] = i;
    return {group_groupoid(grp), grp, part};
  }
  if (kind == "group-delta") {
    FiniteGroup grp = load_group(ld, t, key);
    const std::size_t n = positive("n");
    Groupoid g = product_with_delta(grp, n);
    std::vector<std::size_t> part(g.size());
    for (std::size_t i = 0; i < part.size(); ++i) part[i] = i / (n * n);
    return {std::move(g), grp, part};
  }
  if (kind == "disjoint") {
    std::vector<Groupoid> parts;
    std::size_t i = 0;
    for (const auto& item : *ld.array(t->get("parts"), key + ".parts")) {
      const std::string sub = key + ".parts[" + std::to_string(i++) + "]";
      parts.push_back(load_groupoid(ld, ld.table(&item, sub), sub).groupoid);
    }
    auto prefixes = ld.strings(t->get("prefixes"), key + ".prefixes");
    return {disjoint_union(parts, prefixes), std::nullopt, {}};
  }
  ld.parse_fail(t->get("kind"), key + ".kind", "expected \"delta\", \"group\", \"group-delta\" or \"disjoint\"");
}

Index element_index(const Loader& ld, const Groupoid& g, const std::string& name, const std::string& key) {
  auto i = g.find(name);
  if (!i) ld.invalid(key, "unknown groupoid element '" + name + "'");
  return *i;
}

Twist load_twist(const Loader& ld, const toml::table* t, const BuiltGroupoid& bg, const FieldDescriptor& field) {
  const Groupoid& g = bg.groupoid;
  Twist twist(g, field);
  auto scalar = [&](const std::string& text, const std::string& key) {
    try {
      return Scalar::parse(field, text);
    } catch (const Error& e) {
      ld.invalid(key, e.what());
    }
  };
  auto set = [&](Index a, Index b, const Scalar& c, const std::string& key) {
    try {
      twist.set_alpha(a, b, c);
    } catch (const Error&) {
      ld.invalid(key, "twist value must be nonzero at alpha(" + g.name(a) + ", " + g.name(b) + ")");
    }
  };
  if (!t) return twist;
  ld.only_keys(t, "twist", {"alpha", "sigma", "group_alpha"});
  if (t->contains("group_alpha")) {
    if (!bg.group) ld.invalid("twist.group_alpha", "group_alpha needs a group or group-delta groupoid");
    const FiniteGroup& grp = *bg.group;
    auto find = [&](const std::string& name) {
      auto it = std::find(grp.names.begin(), grp.names.end(), name);
      if (it == grp.names.end()) ld.invalid("twist.group_alpha", "unknown group element '" + name + "'");
      return static_cast<std::size_t>(it - grp.names.begin());
    };
    for (const auto& row : ld.tuples(t->get("group_alpha"), "twist.group_alpha", 3)) {
      const std::size_t h1 = find(row[0]), h2 = find(row[1]);
      const Scalar c = scalar(row[2], "twist.group_alpha");
      for (Index a = 0; a < g.size(); ++a) {
        if (bg.group_part[a] != h1) continue;
        for (Index b = 0; b < g.size(); ++b) {
          if (bg.group_part[b] == h2 && g.mult(a, b)) set(a, b, c, "twist.group_alpha");
        }
      }
    }
  }
  if (t->contains("alpha")) {
    for (const auto& row : ld.tuples(t->get("alpha"), "twist.alpha", 3)) {
      set(element_index(ld, g, row[0], "twist.alpha"), element_index(ld, g, row[1], "twist.alpha"),
          scalar(row[2], "twist.alpha"), "twist.alpha");
    }
  }
  if (t->contains("sigma")) {
    for (const auto& row : ld.tuples(t->get("sigma"), "twist.sigma", 2)) {
      FieldAutomorphism s;
      if (row[1] == "conj") {
        s = FieldAutomorphism::conjugation();
      } else if (row[1] != "id") {
        ld.invalid("twist.sigma", "automorphism must be \"id\" or \"conj\"");
      }
      try {
        s.check_field(field);
      } catch (const Error& e) {
        ld.invalid("twist.sigma", e.what());
      }
      twist.set_sigma(element_index(ld, g, row[0], "twist.sigma"), s);
    }
  }
  return twist;
}

std::vector<ExtInt> load_bounds(const Loader& ld, const toml::table* t, const Groupoid& g, const std::string& key,
                                std::initializer_list<const char*> reserved) {
  std::optional<ExtInt> fallback;
  if (t->contains("default")) fallback = ld.bound(t->get("default"), key + ".default");
  std::vector<std::optional<ExtInt>> b(g.size());
  for (const auto& [k, v] : *t) {
    const std::string name(k.str());
    if (name == "default") continue;
    if (std::find_if(reserved.begin(), reserved.end(), [&](const char* r) { return name == r; }) != reserved.end()) {
      continue;
    }
    b[element_index(ld, g, name, key)] = ld.bound(&v, key + "." + name);
  }
  std::vector<ExtInt> out;
  for (Index x = 0; x < g.size(); ++x) {
    if (!b[x] && !fallback) ld.invalid(key, "no bound for " + g.name(x) + " and no default");
    out.push_back(b[x] ? *b[x] : *fallback);
  }
  return out;
}

void require_valid(const Loader& ld, const BoundPattern& p, const std::string& key) {
  auto report = validate_pattern(p);
  if (!report.pass) {
    ld.invalid(key, "pattern is not a valid " + to_string(p.kind()) + ": " +
                        (report.witnesses.empty() ? std::string("closure fails") : report.witnesses.front()));
  }
}

Side side_of(const Loader& ld, const std::string& text, const std::string& key) {
  if (text == "left") return Side::Left;
  if (text == "right") return Side::Right;
  if (text == "two-sided") return Side::TwoSided;
  ld.invalid(key, "side must be \"left\", \"right\" or \"two-sided\"");
}

PatternKind kind_of(Side s) {
  switch (s) {
    case Side::Left: return PatternKind::LeftIdeal;
    case Side::Right: return PatternKind::RightIdeal;
    case Side::TwoSided: return PatternKind::TwoSidedIdeal;
  }
  return PatternKind::TwoSidedIdeal;
}

Scenario build(const toml::table& root, const std::string& source_name, const std::string& default_id) {
  Loader ld(source_name);
  Scenario s;
  s.id = root.contains("id") ? ld.str(root.get("id"), "id") : default_id;
  if (root.contains("title")) s.title = ld.str(root.get("title"), "title");
  if (root.contains("anchor")) s.anchor = ld.str(root.get("anchor"), "anchor");

  for (const auto& [k, v] : root) {
    static const std::vector<std::string> known = {"id",    "title",  "anchor",   "checks", "field",
                                                   "groupoid", "twist", "subring", "ideals", "rings",
                                                   "elements", "order", "expect"};
    if (std::find(known.begin(), known.end(), std::string(k.str())) == known.end()) {
      ld.parse_fail(&v, std::string(k.str()), "unknown top-level key");
    }
  }

  if (!root.contains("field")) ld.invalid("field", "section is missing");
  if (!root.contains("groupoid")) ld.invalid("groupoid", "section is missing");
  const FieldDescriptor field = load_field(ld, ld.table(root.get("field"), "field"));
  BuiltGroupoid bg = load_groupoid(ld, ld.table(root.get("groupoid"), "groupoid"), "groupoid");
  const toml::table* tw = root.contains("twist") ? ld.table(root.get("twist"), "twist") : nullptr;
  Twist twist = load_twist(ld, tw, bg, field);
  {
    TwistReport tr = validate_twist(bg.groupoid, field, twist);
    for (std::size_t i = 0; i < 4; ++i) {
      if (!tr.conditions[i].pass) {
        const auto& w = tr.conditions[i].witnesses;
        ld.invalid("twist", "condition (" + std::to_string(i + 1) + ") fails" + (w.empty() ? "" : " at " + w.front()));
      }
    }
  }
  s.q = GSkewfield::create(field, bg.groupoid, std::move(twist));
  const Groupoid& g = s.q->groupoid();

  if (root.contains("subring")) {
    s.subring = BoundPattern::subring(s.q, load_bounds(ld, ld.table(root.get("subring"), "subring"), g, "subring", {}));
    require_valid(ld, *s.subring, "subring");
  }

  if (root.contains("elements")) {
    for (const auto& [k, v] : *ld.table(root.get("elements"), "elements")) {
      const std::string key = "elements." + std::string(k.str());
      try {
        s.elements.emplace_back(std::string(k.str()), GradedElement::parse(s.q, ld.str(&v, key)));
      } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError) ld.parse_fail(&v, key, e.what());
        ld.invalid(key, e.what());
      }
    }
  }

  if (root.contains("ideals")) {
    if (!s.subring) ld.invalid("ideals", "ideals need a [subring]");
    for (const auto& [k, v] : *ld.table(root.get("ideals"), "ideals")) {
      const std::string key = "ideals." + std::string(k.str());
      const toml::table* t = ld.table(&v, key);
      const Side side = side_of(ld, t->contains("kind") ? ld.str(t->get("kind"), key + ".kind") : "two-sided", key);
      if (t->contains("generators")) {
        std::vector<GradedElement> gens;
        for (const auto& text : ld.strings(t->get("generators"), key + ".generators")) {
          try {
            gens.push_back(GradedElement::parse(s.q, text));
          } catch (const Error& e) {
            ld.invalid(key, e.what());
          }
        }
        try {
          s.ideals.emplace_back(std::string(k.str()), generated_ideal(*s.subring, gens, side));
        } catch (const Error& e) {
          ld.invalid(key, e.what());
        }
      } else {
        auto p = BoundPattern::ideal(*s.subring, load_bounds(ld, t, g, key, {"kind"}), kind_of(side));
        require_valid(ld, p, key);
        s.ideals.emplace_back(std::string(k.str()), std::move(p));
      }
    }
  }

  if (root.contains("rings")) {
    for (const auto& [k, v] : *ld.table(root.get("rings"), "rings")) {
      const std::string key = "rings." + std::string(k.str());
      auto p = BoundPattern::subring(s.q, load_bounds(ld, ld.table(&v, key), g, key, {}));
      require_valid(ld, p, key);
      s.rings.emplace_back(std::string(k.str()), std::move(p));
    }
  }

  if (root.contains("order")) {
    const toml::table* t = ld.table(root.get("order"), "order");
    ld.only_keys(t, "order", {"relations"});
    GroupoidOrder order(g);
    for (const auto& row : ld.tuples(t->get("relations"), "order.relations", 2)) {
      order.add(element_index(ld, g, row[0], "order.relations"), element_index(ld, g, row[1], "order.relations"));
    }
    order.close();
    s.order = std::move(order);
  }

  if (root.contains("expect")) s.expect = to_json(*ld.table(root.get("expect"), "expect"));

  if (root.contains("checks")) {
    for (const auto& id : ld.strings(root.get("checks"), "checks")) {
      const auto& all = all_checks();
      if (std::find(all.begin(), all.end(), id) == all.end()) ld.invalid("checks", "unknown check '" + id + "'");
      s.checks.push_back(id);
    }
  }
  return s;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source_name) {
  toml::table root;
  try {
    root = toml::parse(text, source_name);
  } catch (const toml::parse_error& e) {
    throw Error(ErrorCode::ParseError, source_name + ":" + std::to_string(e.source().begin.line) + ": " +
                                           std::string(e.description()));
  }
  std::string stem = std::filesystem::path(source_name).stem().string();
  Scenario s = build(root, source_name, stem);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, path.string() + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  Scenario s = parse_scenario(buf.str(), path.string());
  s.source = path;
  return s;
}

// ---------------------------------------------------------------------------
// Checks

const std::vector<std::string>& all_checks() {
  static const std::vector<std::string> ids = {
      "twist",         "skewfield",  "g-simple",  "pattern",       "predicates",       "ideal-order",
      "cyclic",        "positives",  "residue",   "strong",        "radical",          "omega",
      "gbar",          "values",     "min-formula", "itsagroup",   "recovery",         "axioms",
      "positives-agree", "equivalence", "conjugation", "dubrovin", "ordered-valuation"};
  return ids;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skipped: return "skipped";
  }
  return "?";
}

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += sep;
    out += p;
  }
  return out;
}

std::string relation_of(const Valuation& v, const GammaValue& a, const GammaValue& b) {
  if (a == b) return "=";
  if (v.ge(a, b)) return ">";
  if (v.ge(b, a)) return "<";
  return "incomparable";
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) h = (h ^ ch) * 1099511628211ULL;
  return h;
}

/// Whether some element of Q lies outside the pattern.
bool has_outside(const BoundPattern& r) {
  for (const auto& b : r.bounds()) {
    if (b.is_pos_inf() || (b.is_finite() && r.parent()->field().is_discrete())) return true;
  }
  return false;
}

bool relation_matches(const std::string& expected, const std::string& got) {
  if (expected == got) return true;
  if (expected == ">=") return got == ">" || got == "=";
  if (expected == "<=") return got == "<" || got == "=";
  return false;
}

class Runner {
 public:
  Runner(const Scenario& s, const RunOptions& o) : s_(s), o_(o), g_(s.q->groupoid()) {}

  Report run() {
    Report report;
    report.scenario = s_.id;
    report.title = s_.title;
    report.anchor = s_.anchor;
    report.options = o_;
    const std::map<std::string, std::function<void(CheckOutcome&)>> table = {
        {"twist", [&](CheckOutcome& c) { twist(c); }},
        {"skewfield", [&](CheckOutcome& c) { skewfield(c); }},
        {"g-simple", [&](CheckOutcome& c) { g_simple(c); }},
        {"pattern", [&](CheckOutcome& c) { pattern(c); }},
        {"predicates", [&](CheckOutcome& c) { predicates(c); }},
        {"ideal-order", [&](CheckOutcome& c) { ideal_order(c); }},
        {"cyclic", [&](CheckOutcome& c) { cyclic(c); }},
        {"positives", [&](CheckOutcome& c) { positives_check(c); }},
        {"residue", [&](CheckOutcome& c) { residue(c); }},
        {"strong", [&](CheckOutcome& c) { strong(c); }},
        {"radical", [&](CheckOutcome& c) { radical(c); }},
        {"omega", [&](CheckOutcome& c) { omega(c); }},
        {"gbar", [&](CheckOutcome& c) { gbar(c); }},
        {"values", [&](CheckOutcome& c) { values(c); }},
        {"min-formula", [&](CheckOutcome& c) { min_formula(c); }},
        {"itsagroup", [&](CheckOutcome& c) { itsagroup(c); }},
        {"recovery", [&](CheckOutcome& c) { recovery(c); }},
        {"axioms", [&](CheckOutcome& c) { axioms(c); }},
        {"positives-agree", [&](CheckOutcome& c) { positives_agree_check(c); }},
        {"equivalence", [&](CheckOutcome& c) { equivalence(c); }},
        {"conjugation", [&](CheckOutcome& c) { conjugation(c); }},
        {"dubrovin", [&](CheckOutcome& c) { dubrovin(c); }},
        {"ordered-valuation", [&](CheckOutcome& c) { ordered(c); }},
    };
    for (const auto& id : all_checks()) {
      if (!o_.only.empty() && std::find(o_.only.begin(), o_.only.end(), id) == o_.only.end()) continue;
      CheckOutcome c;
      c.id = id;
      // Each check draws from its own stream so that subsets reproduce full runs.
      rng_.seed(o_.seed * 1000003ULL + fnv1a(id));
      const auto start = std::chrono::steady_clock::now();
      try {
        table.at(id)(c);
      } catch (const Error& e) {
        c.status = Status::Fail;
        c.detail = std::string("unexpected error: ") + e.what();
      }
      c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      report.checks.push_back(std::move(c));
    }
    return report;
  }

 private:
  // ---- shared state

  const json* expect(const std::string& key) const {
    auto it = s_.expect.find(key);
    return it == s_.expect.end() ? nullptr : &*it;
  }

  std::size_t count(std::size_t normal, std::size_t slow) const { return o_.slow ? slow : normal; }

  static void fail(CheckOutcome& c, const std::string& witness) {
    c.status = Status::Fail;
    if (c.witnesses.size() < 8) c.witnesses.push_back(witness);
  }

  static void skip(CheckOutcome& c, const std::string& why) {
    c.status = Status::Skipped;
    c.detail = why;
  }

  /// Compares a computed boolean with an optional expectation.
  void expect_bool(CheckOutcome& c, const std::string& key, bool got) {
    c.data[key] = got;
    if (const json* e = expect(key)) {
      if (e->get<bool>() != got) fail(c, key + " is " + (got ? "true" : "false") + ", expected " + e->dump());
    }
  }

  bool total() {
    if (!total_) total_ = s_.subring && is_g_total(*s_.subring);
    return *total_;
  }

  bool valuation_ring() {
    if (!vr_) vr_ = s_.subring && is_g_valuation_ring(*s_.subring);
    return *vr_;
  }

  const CanonicalValuation* valuation() {
    if (!valuation_ && valuation_ring()) valuation_ = std::make_unique<CanonicalValuation>(*s_.subring);
    return valuation_.get();
  }

  /// Skips c unless the scenario has a G-valuation ring; returns the valuation.
  const CanonicalValuation* need_valuation(CheckOutcome& c) {
    if (!s_.subring) {
      skip(c, "scenario has no subring");
      return nullptr;
    }
    if (!valuation_ring()) {
      skip(c, "subring is not a G-valuation ring");
      return nullptr;
    }
    return valuation();
  }

  ExtInt bound_json(const json& j, const std::string& key) const {
    if (j.is_number_integer()) return ExtInt(j.get<std::int64_t>());
    if (j.is_string()) {
      if (auto b = ExtInt::parse(j.get<std::string>())) return *b;
    }
    throw Error(ErrorCode::ValidationError, "expect." + key + ": bad bound " + j.dump());
  }

  /// Compares a pattern with an expected {name: bound} table.
  void expect_bounds(CheckOutcome& c, const std::string& key, const BoundPattern& p) {
    c.data[key] = p.to_string();
    const json* e = expect(key);
    if (!e) return;
    for (auto it = e->begin(); it != e->end(); ++it) {
      const Index x = g_.index_of(it.key());
      const ExtInt want = canonical_bound(s_.q->field(), bound_json(it.value(), key));
      if (p.bound(x) != want) {
        fail(c, key + "[" + it.key() + "] is " + p.bound(x).to_string() + ", expected " + want.to_string());
      }
    }
  }

  // ---- checks

  void twist(CheckOutcome& c) {
    TwistReport r = validate_twist(g_, s_.q->field(), s_.q->twist());
    json conds = json::array();
    for (std::size_t i = 0; i < 4; ++i) {
      conds.push_back(r.conditions[i].pass);
      for (const auto& w : r.conditions[i].witnesses) fail(c, "condition (" + std::to_string(i + 1) + "): " + w);
    }
    c.data["conditions"] = conds;
    c.detail = r.all_pass() ? "conditions (1)-(4) hold" : "twist conditions fail";
  }

  void skewfield(CheckOutcome& c) {
    expect_bool(c, "g_skewfield", is_g_skewfield(*s_.q));
    if (!expect("g_skewfield") && !c.data["g_skewfield"].get<bool>()) fail(c, "a basis unit has no G-inverse");
    c.data["strong"] = is_strong(*s_.q);
    c.detail = "every basis unit u_g is G-invertible";
  }

  void g_simple(CheckOutcome& c) {
    const bool simple = is_g_simple(*s_.q);
    expect_bool(c, "g_simple", simple);
    c.data["components"] = connected_components(g_).classes.size();
    const json* want = expect("nonhomogeneous_ideal");
    try {
      auto z = find_nonhomogeneous_ideal_witness(s_.q);
      c.data["nonhomogeneous_ideal"] = z ? json(z->to_string()) : json(nullptr);
      if (want && want->get<bool>() != z.has_value()) {
        fail(c, std::string("non-homogeneous ideal witness ") + (z ? "found" : "not found") + ", expected " +
                    want->dump());
      }
      c.detail = std::string(simple ? "G-simple" : "not G-simple") +
                 (z ? "; ideal generated by " + z->to_string() + " is proper and not homogeneous" : "");
    } catch (const Error& e) {
      c.data["nonhomogeneous_ideal"] = e.what();
      if (want && want->get<bool>()) fail(c, e.what());
      c.detail = simple ? "G-simple" : "not G-simple";
    }
  }

  void pattern(CheckOutcome& c) {
    if (!s_.subring) return skip(c, "scenario has no subring");
    auto check = [&](const std::string& name, const BoundPattern& p) {
      auto r = validate_pattern(p);
      c.data[name] = p.to_string();
      for (const auto& w : r.witnesses) fail(c, name + ": " + w);
    };
    check("R", *s_.subring);
    for (const auto& [name, p] : s_.ideals) check(name, p);
    for (const auto& [name, p] : s_.rings) check(name, p);
    c.detail = std::to_string(1 + s_.ideals.size() + s_.rings.size()) + " patterns satisfy their closure rules";
  }

  void predicates(CheckOutcome& c) {
    if (!s_.subring) return skip(c, "scenario has no subring");
    expect_bool(c, "g_total", total());
    expect_bool(c, "g_stable", is_g_stable(*s_.subring));
    expect_bool(c, "valuation_ring", valuation_ring());
    c.detail = std::string(total() ? "G-total" : "not G-total") + ", " +
               (c.data["g_stable"].get<bool>() ? "G-stable" : "not G-stable");
  }

  void ideal_order(CheckOutcome& c) {
    if (s_.ideals.size() < 2 && !expect("relations")) return skip(c, "fewer than two ideals");
    json pairs = json::array();
    for (std::size_t i = 0; i < s_.ideals.size(); ++i) {
      for (std::size_t j = i + 1; j < s_.ideals.size(); ++j) {
        auto cmp = ideal_compare(s_.ideals[i].second, s_.ideals[j].second);
        pairs.push_back({s_.ideals[i].first, s_.ideals[j].first, to_string(cmp.relation)});
      }
    }
    c.data["pairs"] = pairs;
    if (const json* e = expect("relations")) {
      for (const auto& row : *e) {
        const std::string a = row.at(0), b = row.at(1), want = row.at(2);
        auto cmp = ideal_compare(s_.ideal(a), s_.ideal(b));
        auto names = [&](const std::vector<Index>& xs) {
          std::vector<std::string> out;
          for (Index x : xs) out.push_back(g_.name(x));
          return "{" + join(out, ", ") + "}";
        };
        const std::string got = to_string(cmp.relation);
        c.witnesses.push_back(a + " not inside " + b + " at " + names(cmp.i_not_in_j) + "; " + b + " not inside " +
                              a + " at " + names(cmp.j_not_in_i));
        if (got != want) fail(c, a + " vs " + b + ": " + got + ", expected " + want);
      }
    }
    c.detail = "componentwise comparison of " + std::to_string(s_.ideals.size()) + " ideals";
  }

  void cyclic(CheckOutcome& c) {
    const json* e = expect("cyclic");
    if (!e) return skip(c, "no cyclicity claims");
    for (const auto& row : *e) {
      const std::string name = row.at(0), side_text = row.at(1);
      const bool want = row.at(2);
      const Side side = side_text == "left" ? Side::Left : side_text == "right" ? Side::Right : Side::TwoSided;
      auto gen = is_cyclic(s_.ideal(name), side, o_.window);
      c.data[name] = gen ? json(gen->to_string()) : json(nullptr);
      const std::string what = gen ? name + " = (" + gen->to_string() + ")"
                                   : name + " has no generator p^m u_g with |m| <= " + std::to_string(o_.window);
      if (gen.has_value() != want) {
        fail(c, what);
      } else {
        c.witnesses.push_back(what);
      }
    }
    c.detail = "single-generator search over the window";
  }

  void positives_check(CheckOutcome& c) {
    if (!s_.subring) return skip(c, "scenario has no subring");
    if (!total()) return skip(c, "subring is not G-total");
    Positives p = positives(*s_.subring);
    expect_bounds(c, "positives", p.ideal);
    auto r = validate_pattern(p.ideal);
    for (const auto& w : r.witnesses) fail(c, "M: " + w);
    for (Index e : g_.idempotents()) {
      if (p.ideal.contains(GradedElement::unit(s_.q, e))) fail(c, "M contains 1_" + g_.name(e));
    }
    c.detail = "M = " + p.ideal.to_string();
  }

  void residue(CheckOutcome& c) {
    if (!s_.subring) return skip(c, "scenario has no subring");
    if (!total()) return skip(c, "subring is not G-total");
    ResidueSkewfield res = residue_skewfield(*s_.subring);
    std::vector<std::string> support;
    for (Index x : res.support) support.push_back(g_.name(x));
    c.data["support"] = support;
    c.data["field"] = res.skewfield->field().to_string();
    const bool skew = is_g_skewfield(*res.skewfield);
    if (!skew) fail(c, "R/M is not a G-skewfield");
    const bool simple_artinian =
        res.support.size() == g_.size() && connected_components(res.skewfield->groupoid()).classes.size() == 1;
    expect_bool(c, "residue_simple_artinian", simple_artinian);
    if (const json* e = expect("residue_support")) {
      auto want = e->get<std::vector<std::string>>();
      auto got = support;
      std::sort(want.begin(), want.end());
      std::sort(got.begin(), got.end());
      if (want != got) fail(c, "support {" + join(support, ", ") + "}, expected {" + join(want, ", ") + "}");
    }
    c.detail = "R/M over " + res.skewfield->field().to_string() + " supported on {" + join(support, ", ") + "}";
  }

  /// Random component ideal choices, one bound per representative idempotent.
  std::map<Index, ExtInt> random_component_bounds(const BoundPattern& ring) {
    std::map<Index, ExtInt> out;
    std::uniform_int_distribution<int> d(0, 5);
    for (Index e : component_representatives(g_)) {
      const ExtInt& b = ring.bound(e);
      const int k = d(rng_);
      if (k == 5 || !b.is_finite()) {
        out[e] = k % 2 ? ExtInt::pos_inf() : b;
      } else {
        out[e] = canonical_bound(s_.q->field(), ExtInt(b.value() + k));
      }
    }
    return out;
  }

  void strong(CheckOutcome& c) {
    if (!s_.subring) return skip(c, "scenario has no subring");
    const BoundPattern& r = *s_.subring;
    const bool st = is_strongly_graded(r);
    expect_bool(c, "strongly_graded", st);
    if (!st) {
      try {
        extend_component_ideals(r, restrict_component_ideals(r));
        fail(c, "extension accepted a ring that is not strongly graded");
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotStrong) throw;
      }
      c.detail = "not strongly graded; extension refused";
      return;
    }
    const std::size_t n = count(50, 500);
    for (std::size_t i = 0; i < n; ++i) {
      auto comps = random_component_bounds(r);
      BoundPattern ideal = extend_component_ideals(r, comps);
      auto v = validate_pattern(ideal);
      if (!v.pass) fail(c, "extension of a component choice is not an ideal: " + v.witnesses.front());
      std::map<Index, ExtInt> back = restrict_component_ideals(ideal);
      std::map<Index, ExtInt> canon;
      for (const auto& [e, b] : comps) canon[e] = canonical_bound(s_.q->field(), b);
      if (back != canon) fail(c, "restrict(extend(I_e)) differs for " + ideal.to_string());
      if (!extend_component_ideals(r, back).same_bounds(ideal)) fail(c, "extend(restrict(I)) differs");
    }
    c.data["round_trips"] = n;
    c.detail = "strongly graded; " + std::to_string(n) + " extend/restrict round trips";
  }

  void radical(CheckOutcome& c) {
    if (!s_.subring) return skip(c, "scenario has no subring");
    if (!is_strongly_graded(*s_.subring)) return skip(c, "subring is not strongly graded");
    BoundPattern j = g_jacobson_radical(*s_.subring);
    auto v = validate_pattern(j);
    for (const auto& w : v.witnesses) fail(c, w);
    for (Index e : g_.idempotents()) {
      if (j.contains(GradedElement::unit(s_.q, e))) fail(c, "radical contains 1_" + g_.name(e));
    }
    c.data["radical"] = j.to_string();
    c.detail = "J = " + j.to_string();
  }

  void omega(CheckOutcome& c) {
    const CanonicalValuation* v = need_valuation(c);
    if (!v) return;
    const BoundPattern& r = *s_.subring;
    json orbits = json::array();
    for (const auto& o : v->orbits()) {
      std::vector<std::string> names;
      for (Index x : o.degrees) names.push_back(g_.name(x));
      orbits.push_back({{"rep", g_.name(o.rep)}, {"loop", o.loop}, {"degrees", names}});
    }
    c.data["orbits"] = orbits;
    if (const json* e = expect("omega_orbits")) {
      if (e->get<std::size_t>() != v->orbits().size()) {
        fail(c, std::to_string(v->orbits().size()) + " orbits, expected " + e->dump());
      }
    }
    if (const json* e = expect("omega_loop")) {
      for (const auto& o : v->orbits()) {
        if (o.loop != e->get<std::int64_t>()) fail(c, "orbit of " + g_.name(o.rep) + " has loop " + std::to_string(o.loop));
      }
    }
    if (const json* e = expect("omega_order")) {
      for (const auto& row : *e) {
        const std::string a = row.at(0), b = row.at(1), want = row.at(2);
        const OmegaClass wa = v->omega(g_.index_of(a), 0), wb = v->omega(g_.index_of(b), 0);
        std::string got = wa == wb                ? "="
                          : v->omega_ge(wa, wb) ? ">"
                          : v->omega_ge(wb, wa) ? "<"
                                                : "incomparable";
        c.witnesses.push_back("class of 1_" + a + " " + got + " class of 1_" + b);
        if (!relation_matches(want, got)) fail(c, "1_" + a + " vs 1_" + b + ": " + got + ", expected " + want);
      }
    }

    // Canonical forms are constant on R-unit orbits.
    std::vector<GradedElement> units;
    for (Index x = 0; x < g_.size(); ++x) {
      for (const auto& sc : window_scalars(s_.q->field(), std::min(o_.window, 3))) {
        GradedElement h = GradedElement::homogeneous(s_.q, x, sc);
        if (r.contains(h) && r.contains(*g_inverse(h))) units.push_back(h);
      }
    }
    const std::size_t trials = count(500, 5000);
    std::size_t tested = 0;
    for (std::size_t i = 0; i < trials && !units.empty(); ++i) {
      const Index x = std::uniform_int_distribution<Index>(0, g_.size() - 1)(rng_);
      GradedElement h = GradedElement::homogeneous(s_.q, x, random_scalar(s_.q->field(), rng_));
      std::vector<const GradedElement*> left, right;
      for (const auto& u : units) {
        if (g_.target(*u.degree()) == g_.source(x)) left.push_back(&u);
        if (g_.source(*u.degree()) == g_.target(x)) right.push_back(&u);
      }
      if (left.empty() || right.empty()) continue;
      const GradedElement& a = *left[std::uniform_int_distribution<std::size_t>(0, left.size() - 1)(rng_)];
      const GradedElement& b = *right[std::uniform_int_distribution<std::size_t>(0, right.size() - 1)(rng_)];
      const GradedElement moved = a * h * b;
      ++tested;
      if (v->omega_of(moved) != v->omega_of(h)) {
        fail(c, "class of " + h.to_string() + " changes under " + a.to_string() + " * . * " + b.to_string());
      }
    }
    c.data["unit_orbit_trials"] = tested;

    // Order: antisymmetric, every class comparable to its source and target,
    // and compatible with multiplication.
    std::vector<OmegaClass> classes;
    std::vector<Index> degree_of;
    const int w = std::min(o_.window, 3);
    for (Index x = 0; x < g_.size(); ++x) {
      for (int m = -w; m <= w; ++m) {
        OmegaClass cl = v->omega(x, m);
        if (std::find(classes.begin(), classes.end(), cl) == classes.end()) {
          classes.push_back(cl);
          degree_of.push_back(x);
        }
      }
    }
    for (std::size_t i = 0; i < classes.size(); ++i) {
      const Index x = degree_of[i];
      const OmegaClass src = v->omega(g_.source(x), 0), tgt = v->omega(g_.target(x), 0);
      if (!v->omega_ge(classes[i], tgt) && !v->omega_ge(tgt, classes[i])) {
        fail(c, v->render_omega(classes[i]) + " is not comparable to its target");
      }
      if (!v->omega_ge(classes[i], src) && !v->omega_ge(src, classes[i])) {
        fail(c, v->render_omega(classes[i]) + " is not comparable to its source");
      }
      for (std::size_t j = 0; j < classes.size(); ++j) {
        if (i != j && v->omega_ge(classes[i], classes[j]) && v->omega_ge(classes[j], classes[i])) {
          fail(c, "antisymmetry fails for " + v->render_omega(classes[i]) + ", " + v->render_omega(classes[j]));
        }
      }
    }
    std::size_t compat = 0;
    for (Index y = 0; y < g_.size(); ++y) {
      const OmegaClass chi = v->omega(y, 0);
      for (std::size_t i = 0; i < classes.size(); ++i) {
        for (std::size_t j = 0; j < classes.size(); ++j) {
          if (!v->omega_ge(classes[j], classes[i])) continue;
          auto l1 = v->omega_product(chi, classes[i]), l2 = v->omega_product(chi, classes[j]);
          if (l1 && l2 && g_.mult(y, degree_of[i]) && g_.mult(y, degree_of[j])) {
            ++compat;
            if (!v->omega_ge(*l2, *l1)) fail(c, "left multiplication by " + v->render_omega(chi) + " breaks order");
          }
          auto r1 = v->omega_product(classes[i], chi), r2 = v->omega_product(classes[j], chi);
          if (r1 && r2 && g_.mult(degree_of[i], y) && g_.mult(degree_of[j], y)) {
            ++compat;
            if (!v->omega_ge(*r2, *r1)) fail(c, "right multiplication by " + v->render_omega(chi) + " breaks order");
          }
        }
      }
    }
    c.data["order_classes"] = classes.size();
    c.data["compatibility_cases"] = compat;
    c.detail = std::to_string(v->orbits().size()) + " orbit(s); order checked on " + std::to_string(classes.size()) +
               " classes";
  }

  void gbar(CheckOutcome& c) {
    const CanonicalValuation* v = need_valuation(c);
    if (!v) return;
    json classes = json::array();
    for (const auto& cls : v->gbar_classes()) {
      std::vector<std::string> names;
      for (Index x : cls) names.push_back(g_.name(x));
      classes.push_back(names);
    }
    c.data["classes"] = classes;
    json lt = json::array();
    for (std::size_t a = 0; a < v->gbar_classes().size(); ++a) {
      for (std::size_t b = 0; b < v->gbar_classes().size(); ++b) {
        if (v->gbar_lt(a, b)) lt.push_back({v->gbar_name(a), v->gbar_name(b)});
      }
    }
    c.data["less"] = lt;
    if (const json* e = expect("gbar_classes")) {
      if (e->get<std::size_t>() != v->gbar_classes().size()) {
        fail(c, std::to_string(v->gbar_classes().size()) + " classes, expected " + e->dump());
      }
    }
    if (const json* e = expect("gbar_order")) {
      for (const auto& row : *e) {
        const std::string a = row.at(0), b = row.at(1), want = row.at(2);
        const std::size_t ca = v->gbar_of(g_.index_of(a)), cb = v->gbar_of(g_.index_of(b));
        std::string got = ca == cb ? "=" : v->gbar_lt(ca, cb) ? "<" : v->gbar_lt(cb, ca) ? ">" : "incomparable";
        if (got != want) fail(c, "[" + a + "] vs [" + b + "]: " + got + ", expected " + want);
      }
    }
    c.detail = std::to_string(v->gbar_classes().size()) + " class(es)";
  }

  void values(CheckOutcome& c) {
    const CanonicalValuation* v = need_valuation(c);
    if (!v) return;
    if (s_.elements.empty()) return skip(c, "scenario has no elements");
    json vals = json::object();
    std::map<std::string, GammaValue> got;
    for (const auto& [name, x] : s_.elements) {
      try {
        got[name] = v->value(x);
        vals[name] = v->render(got[name]);
      } catch (const Error& e) {
        vals[name] = e.what();
        fail(c, name + ": " + e.what());
      }
    }
    c.data["values"] = vals;
    if (const json* e = expect("values")) {
      for (auto it = e->begin(); it != e->end(); ++it) {
        s_.element(it.key());
        const std::string want = it.value();
        if (!got.count(it.key()) || v->render(got[it.key()]) != want) {
          fail(c, "v(" + it.key() + ") = " + vals[it.key()].get<std::string>() + ", expected " + want);
        }
      }
    }
    if (const json* e = expect("compare")) {
      for (const auto& row : *e) {
        const std::string a = row.at(0), b = row.at(1), want = row.at(2);
        s_.element(a);
        s_.element(b);
        if (!got.count(a) || !got.count(b)) continue;
        const std::string rel = relation_of(*v, got[a], got[b]);
        c.witnesses.push_back("v(" + a + ") " + rel + " v(" + b + ")");
        if (!relation_matches(want, rel)) fail(c, "v(" + a + ") " + rel + " v(" + b + "), expected " + want);
      }
    }
    c.detail = "valued " + std::to_string(s_.elements.size()) + " element(s)";
  }

  void min_formula(CheckOutcome& c) {
    const CanonicalValuation* v = need_valuation(c);
    if (!v) return;
    if (!s_.q->field().is_discrete() || v->gbar_classes().size() != 1 || v->orbits().size() != 1 ||
        v->orbits().front().loop != 0) {
      return skip(c, "Gamma is not identified with Z");
    }
    // Gamma = Z through the offset of the single orbit.
    const std::size_t n = count(100, 1000);
    for (std::size_t i = 0; i < n; ++i) {
      GradedElement x = random_element(s_.q, rng_, 0.75);
      std::optional<std::int64_t> least;
      for (const auto& [g, a] : x.coefficients()) {
        const std::int64_t m = valuate(a).value() - v->shift(g);
        if (!least || m < *least) least = m;
      }
      const GammaValue got = v->value(x);
      if (!got.is_single() || got.terms.begin()->second.offset != *least) {
        fail(c, "v(" + x.to_string() + ") = " + v->render(got) + ", min formula gives " + std::to_string(*least));
      }
    }
    c.data["samples"] = n;
    c.detail = std::to_string(n) + " random elements agree with the min formula";
  }

  void itsagroup(CheckOutcome& c) {
    const CanonicalValuation* v = need_valuation(c);
    if (!v) return;
    bool full = true;
    for (Index x = 0; x < g_.size(); ++x) full = full && !s_.subring->bound(x).is_pos_inf();
    const bool connected = connected_components(g_).classes.size() == 1;
    const std::size_t idem = v->gamma_idempotents().size();
    c.data["gamma_idempotents"] = idem;
    if (const json* e = expect("gamma_group")) {
      if (e->get<bool>() != (idem == 1)) fail(c, std::to_string(idem) + " idempotent(s), expected group " + e->dump());
    }
    if (!full || !connected) {
      if (!expect("gamma_group")) skip(c, "support is not connected and full");
      c.detail = std::to_string(idem) + " idempotent value(s); hypotheses do not apply";
      return;
    }
    if (idem != 1) fail(c, "Gamma has " + std::to_string(idem) + " idempotents");
    c.detail = "Gamma is a group (one idempotent)";
  }

  void recovery(CheckOutcome& c) {
    const CanonicalValuation* v = need_valuation(c);
    if (!v) return;
    auto [t, s] = recover_rings(*v);
    c.data["T_v"] = t.to_string();
    c.data["S_v"] = s.to_string();
    if (!t.same_bounds(*s_.subring)) fail(c, "T_v = " + t.to_string() + " differs from R");
    if (!s.same_bounds(*s_.subring)) fail(c, "S_v = " + s.to_string() + " differs from R");
    c.detail = "T_v = R = S_v = " + s_.subring->to_string();
  }

  void axioms(CheckOutcome& c) {
    const CanonicalValuation* v = need_valuation(c);
    if (!v) return;
    AxiomReport r = check_axioms(*v, {o_.window, count(1000, 10000), o_.seed});
    std::vector<std::string> failed;
    for (const auto& a : r.checks) {
      c.data[a.name] = {{"pass", a.pass}, {"cases", a.cases}};
      if (!a.pass) failed.push_back(a.name);
      for (const auto& w : a.witnesses) fail(c, a.name + ": " + w);
    }
    c.detail = failed.empty() ? "axioms (1)-(3), canonicity (4) and associativity hold"
                              : "failing: " + join(failed, ", ");
  }

  void positives_agree_check(CheckOutcome& c) {
    const CanonicalValuation* v = need_valuation(c);
    if (!v) return;
    SetComparison r = positives_agree(*v, *s_.subring, o_.window);
    for (const auto& w : r.witnesses) fail(c, w);
    c.data["cases"] = r.cases;
    c.detail = "{h : h^-1 not in R} = {h : v(h) > v(t(h))} on " + std::to_string(r.cases) + " homogeneous members";
  }

  void equivalence(CheckOutcome& c) {
    const CanonicalValuation* v = need_valuation(c);
    if (!v) return;
    CanonicalValuation relabeled(*s_.subring);
    relabeled.set_offset_scale(2);
    auto same = equivalent(*v, *v);
    auto rel = equivalent(*v, relabeled);
    c.data["self"] = same.equivalent;
    c.data["relabeled"] = rel.equivalent && rel.map_consistent;
    if (!same.equivalent) fail(c, "v is not equivalent to itself");
    if (!rel.equivalent || !rel.map_consistent) fail(c, "relabeled v is not equivalent to v");
    for (const auto& [name, ring] : s_.rings) {
      if (!is_g_valuation_ring(ring)) continue;
      CanonicalValuation w(ring);
      auto e = equivalent(*v, w);
      const bool want = ring.same_bounds(*s_.subring);
      c.data[name] = e.equivalent;
      if (e.equivalent != want) fail(c, "v vs v(" + name + "): " + (e.equivalent ? "equivalent" : "not equivalent"));
    }
    c.detail = "equivalence decided by T_v = T_w";
  }

  void conjugation(CheckOutcome& c) {
    if (!s_.subring) return skip(c, "scenario has no subring");
    const BoundPattern& r = *s_.subring;
    std::optional<Index> shear;
    for (Index x = 0; x < g_.size() && !shear; ++x) {
      if (g_.source(x) != g_.target(x)) shear = x;
    }
    GradedElement q = GradedElement::one(s_.q);
    if (shear) {
      q = q + GradedElement::unit(s_.q, *shear);
    } else {
      for (Index x = 0; x < g_.size() && q.is_homogeneous() == false; ++x) {
        if (!g_.is_idempotent(x)) q = GradedElement::unit(s_.q, x);
      }
    }
    ConjugateRing id(r, GradedElement::one(s_.q));
    ConjugateRing t(r, q);
    c.data["q"] = q.to_string();
    const std::size_t n = count(200, 2000);
    for (std::size_t i = 0; i < n; ++i) {
      GradedElement y = random_element(s_.q, rng_);
      if (id.contains(y) != r.contains(y)) fail(c, "q = 1 changes membership of " + y.to_string());
      GradedElement m = random_member(r, rng_);
      if (!t.contains(q * m * t.q_inverse())) fail(c, "q y q^-1 not in qRq^-1 for y = " + m.to_string());
      if (has_outside(r)) {
        GradedElement out = random_nonmember(r, rng_);
        if (t.contains(q * out * t.q_inverse())) fail(c, "q y q^-1 in qRq^-1 for y = " + out.to_string() + " outside R");
      }
    }
    // Totality in the transported grading.
    bool transported_total = true;
    for (Index x = 0; x < g_.size(); ++x) {
      for (const auto& sc : window_scalars(s_.q->field(), std::min(o_.window, 3))) {
        GradedElement h = t.homogeneous(x, sc);
        if (!t.contains(h) && !t.contains(t.transported_inverse(h))) transported_total = false;
      }
    }
    c.data["transported_total"] = transported_total;
    if (transported_total != total()) fail(c, "transported totality differs from totality of R");
    c.detail = "qRq^-1 for q = " + q.to_string() + " on " + std::to_string(n) + " samples";
  }

  void dubrovin(CheckOutcome& c) {
    if (!s_.subring) return skip(c, "scenario has no subring");
    const json* e = expect("dubrovin");
    const std::string want = e ? e->get<std::string>() : "";
    DubrovinReport d;
    try {
      d = dubrovin_check(*s_.subring);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::HypothesisViolation) throw;
      c.data["result"] = "HypothesisViolation";
      if (want == "pass") fail(c, err.what());
      if (want.empty()) return skip(c, err.what());
      c.detail = err.what();
      return;
    }
    c.data["result"] = "pass";
    c.data["residue_simple_artinian"] = d.residue_simple_artinian;
    c.data["gamma_is_group"] = d.gamma_is_group;
    if (want == "HypothesisViolation") fail(c, "hypotheses hold, expected HypothesisViolation");
    if (!d.residue_simple_artinian) fail(c, "R/J(R) is not simple artinian");
    if (!d.gamma_is_group) fail(c, "Gamma is not a group");
    const std::size_t n = has_outside(*s_.subring) ? count(50, 500) : 0;
    for (std::size_t i = 0; i < n; ++i) {
      GradedElement x = random_nonmember(*s_.subring, rng_);
      auto w = dubrovin_witness(*s_.subring, x);
      if (!w.verified) fail(c, "witness for " + x.to_string() + " does not verify");
    }
    c.data["witnesses"] = n;
    c.detail = "hypotheses hold; " + std::to_string(n) + " outside elements have verified witnesses";
  }

  void ordered(CheckOutcome& c) {
    if (!s_.order) return skip(c, "scenario has no groupoid order");
    OrderReport orep = validate_order(*s_.order);
    c.data["partial_order"] = orep.partial_order;
    c.data["compatible"] = orep.compatible;
    c.data["ordered"] = orep.ordered;
    for (const auto& w : orep.witnesses) fail(c, w);
    OrderedGroupoidValuation v(s_.q, *s_.order);
    auto [t, s] = recover_rings(v);
    expect_bounds(c, "t_v", t);
    expect_bounds(c, "s_v", s);
    AxiomReport r = check_axioms(v, {o_.window, count(1000, 10000), o_.seed});
    for (const auto& a : r.checks) {
      c.data[a.name] = {{"pass", a.pass}, {"cases", a.cases}};
      if (a.name == "canonical" || a.name == "canonical-sums") continue;
      for (const auto& w : a.witnesses) fail(c, a.name + ": " + w);
    }
    if (const json* e = expect("ordered_canonical")) {
      const bool canon = c.data["canonical"]["pass"].get<bool>();
      if (canon != e->get<bool>()) fail(c, std::string("canonicity is ") + (canon ? "true" : "false"));
    }
    c.detail = "T_v = " + t.to_string() + ", S_v = " + s.to_string();
  }

  const Scenario& s_;
  RunOptions o_;
  const Groupoid& g_;
  std::mt19937_64 rng_;
  std::optional<bool> total_, vr_;
  std::unique_ptr<CanonicalValuation> valuation_;
};

}  // namespace

Report run_checks(const Scenario& s, const RunOptions& options) { return Runner(s, options).run(); }

bool Report::passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckOutcome& c) { return c.status == Status::Fail; });
}

nlohmann::json Report::to_json() const {
  json out;
  out["schema"] = 1;
  out["tool"] = "gradval";
  out["version"] = kVersion;
  out["scenario"] = scenario;
  out["title"] = title;
  out["anchor"] = anchor;
  out["seed"] = options.seed;
  out["window"] = options.window;
  out["slow"] = options.slow;
  json list = json::array();
  std::size_t pass = 0, fail = 0, skipped = 0;
  for (const auto& c : checks) {
    json j;
    j["id"] = c.id;
    j["status"] = to_string(c.status);
    j["detail"] = c.detail;
    j["witnesses"] = c.witnesses;
    j["data"] = c.data;
    list.push_back(std::move(j));
    (c.status == Status::Pass ? pass : c.status == Status::Fail ? fail : skipped)++;
  }
  out["checks"] = list;
  out["summary"] = {{"pass", pass}, {"fail", fail}, {"skipped", skipped}};
  out["verdict"] = passed() ? "pass" : "fail";
  if (options.timing) {
    json t = json::object();
    for (const auto& c : checks) t[c.id] = c.seconds;
    out["timing"] = t;
  }
  return out;
}

std::string Report::to_text() const {
  std::ostringstream out;
  out << "scenario " << scenario;
  if (!anchor.empty()) out << " (" << anchor << ")";
  out << "\n";
  std::size_t pass = 0, fail = 0, skipped = 0;
  for (const auto& c : checks) {
    std::string tag = c.status == Status::Pass ? "PASS" : c.status == Status::Fail ? "FAIL" : "SKIP";
    out << "  " << tag << "  " << c.id << std::string(c.id.size() < 18 ? 18 - c.id.size() : 1, ' ') << c.detail;
    if (options.timing) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "  [%.3fs]", c.seconds);
      out << buf;
    }
    out << "\n";
    if (c.status == Status::Fail) {
      for (const auto& w : c.witnesses) out << "        witness: " << w << "\n";
    }
    (c.status == Status::Pass ? pass : c.status == Status::Fail ? fail : skipped)++;
  }
  out << "result: " << pass << " pass, " << fail << " fail, " << skipped << " skipped\n";
  return out.str();
}

const std::vector<std::string>& reproducible_examples() {
  static const std::vector<std::string> names = {"gvalex",       "triangular-valuation", "m2-full",
                                                 "quaternion",   "quaternion-matrix",    "twisted-sqrt",
                                                 "gsimple-not-simple", "delta2-order"};
  return names;
}

Report reproduce(const std::string& name, const std::filesystem::path& corpus_dir, RunOptions options) {
  const auto& names = reproducible_examples();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw Error(ErrorCode::UnknownExample, "'" + name + "' is not a reproducible example (try: " + join(names, ", ") + ")");
  }
  Scenario s = load_scenario(corpus_dir / (name + ".toml"));
  options.only = s.checks;
  return run_checks(s, options);
}

}  // namespace gradval
