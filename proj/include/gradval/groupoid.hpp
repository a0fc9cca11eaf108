#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gradval {

/// A finite groupoid: a set with a partial, associative multiplication in
/// which every element has an inverse. Elements are addressed by index and
/// carry stable names fixed at construction.
class Groupoid {
 public:
  using Index = std::size_t;
  static constexpr std::size_t kMaxElements = 4096;

  /// Builds a groupoid from its multiplication table (table[a][b] is the
  /// product or nullopt). Validates every groupoid invariant and throws
  /// ValidationError with a witness on failure.
  static Groupoid from_table(std::vector<std::string> names,
                             const std::vector<std::vector<std::optional<Index>>>& table);

  std::size_t size() const { return names_.size(); }
  const std::string& name(Index g) const { return names_.at(g); }
  const std::vector<std::string>& names() const { return names_; }
  /// Throws UnknownElement.
  Index index_of(const std::string& name) const;
  std::optional<Index> find(const std::string& name) const;

  /// Product g*h, or nullopt when t(g) != s(h).
  std::optional<Index> mult(Index g, Index h) const { return table_[g * size() + h]; }
  bool composable(Index g, Index h) const { return target_[g] == source_[h]; }
  Index inverse(Index g) const { return inverse_[g]; }
  Index source(Index g) const { return source_[g]; }
  Index target(Index g) const { return target_[g]; }
  bool is_idempotent(Index g) const { return source_[g] == g; }
  const std::vector<Index>& idempotents() const { return idempotents_; }
  /// Isotropy group at an idempotent e: all g with s(g) = t(g) = e.
  std::vector<Index> isotropy(Index e) const;

  bool operator==(const Groupoid& o) const { return names_ == o.names_ && table_ == o.table_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Index> by_name_;
  std::vector<std::optional<Index>> table_;
  std::vector<Index> inverse_, source_, target_;
  std::vector<Index> idempotents_;
};

/// A finite group given by its multiplication table.
struct FiniteGroup {
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> table;

  std::size_t size() const { return names.size(); }
  /// Throws ValidationError unless the table is a group law.
  void validate() const;
};

FiniteGroup cyclic_group(std::size_t order);
/// (Z/2Z)^2 with elements named 1, i, j, k.
FiniteGroup klein_four_group();

/// Delta_n: matrix units e_ij with e_ij * e_kl = e_il iff j = k. Names are
/// "e<i><j>" for n <= 9 and "e<i>_<j>" otherwise.
Groupoid delta(std::size_t n);
/// A group viewed as a one-object groupoid.
Groupoid group_groupoid(const FiniteGroup& group);
/// H[Delta_n] = H x Delta_n with elements named "(h,e_ij)".
Groupoid product_with_delta(const FiniteGroup& group, std::size_t n);
/// Disjoint union; element names become "<prefix><name>".
Groupoid disjoint_union(const std::vector<Groupoid>& parts, const std::vector<std::string>& prefixes);

struct ConnectedPartition {
  std::vector<std::vector<Groupoid::Index>> classes;
  std::vector<std::size_t> class_of;
};

/// Connected components: g and g' are connected when some morphism runs from
/// t(g) to s(g').
ConnectedPartition connected_components(const Groupoid& g);

struct QuotientGroupoid {
  Groupoid groupoid;
  /// Element of the original groupoid -> index of its class.
  std::vector<Groupoid::Index> projection;
};

/// G/F for a wide normal subgroupoid F (contains G_0, and
/// g F_{t(g)} g^-1 = F_{s(g)} for every g). Classes are named "[rep]" after
/// their lowest-index member. Throws NotSubgroupoid or NormalityViolation.
QuotientGroupoid quotient(const Groupoid& g, std::span<const Groupoid::Index> subgroupoid);

/// A relation on a groupoid, intended to be a compatible partial order.
class GroupoidOrder {
 public:
  explicit GroupoidOrder(Groupoid base);
  /// Adds g <= h.
  void add(Groupoid::Index g, Groupoid::Index h);
  /// Replaces the relation by its reflexive-transitive closure.
  void close();

  bool le(Groupoid::Index g, Groupoid::Index h) const { return le_[g * base_.size() + h]; }
  bool lt(Groupoid::Index g, Groupoid::Index h) const { return g != h && le(g, h); }
  const Groupoid& base() const { return base_; }

 private:
  Groupoid base_;
  std::vector<bool> le_;
};

struct OrderReport {
  bool partial_order = true;
  bool compatible = true;
  bool ordered = true;
  std::vector<std::string> witnesses;
};

OrderReport validate_order(const GroupoidOrder& order);

}  // namespace gradval
