#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gradval/extended_int.hpp"
#include "gradval/graded.hpp"

namespace gradval {

enum class PatternKind { Subring, LeftIdeal, RightIdeal, TwoSidedIdeal };
enum class Side { Left, Right, TwoSided };

std::string to_string(PatternKind kind);
std::string to_string(Side side);

/// Canonical form of a component bound: under the trivial valuation every
/// finite b <= 0 (and -inf) is the full component 0, every b >= 1 the zero
/// component +inf. Identity for discrete valuations.
ExtInt canonical_bound(const FieldDescriptor& field, const ExtInt& b);
/// Smallest bound strictly above b: b + 1, or +inf when the value group is
/// trivial. succ(-inf) = +inf stands for the zero ideal of a full component.
ExtInt successor_bound(const FieldDescriptor& field, const ExtInt& b);

/// A homogeneous subring or ideal of a G-skewfield given by one valuation
/// bound per groupoid element: sum c_g u_g is a member iff w(c_g) >= b_g.
/// Bounds are stored in canonical form.
class BoundPattern {
 public:
  static BoundPattern subring(QPtr q, std::vector<ExtInt> bounds);
  /// An ideal of the given subring pattern.
  static BoundPattern ideal(const BoundPattern& ring, std::vector<ExtInt> bounds, PatternKind kind);

  const QPtr& parent() const { return parent_; }
  PatternKind kind() const { return kind_; }
  bool is_ideal() const { return kind_ != PatternKind::Subring; }
  /// The subring an ideal lives in; null for subrings.
  const std::shared_ptr<const BoundPattern>& ambient() const { return ambient_; }
  const std::vector<ExtInt>& bounds() const { return bounds_; }
  const ExtInt& bound(Index g) const { return bounds_.at(g); }
  std::size_t size() const { return bounds_.size(); }

  bool contains_homogeneous(Index g, const Scalar& c) const;
  bool contains(const GradedElement& x) const;

  /// Same parent and same canonical bounds (kind is ignored).
  bool same_bounds(const BoundPattern& o) const { return parent_ == o.parent_ && bounds_ == o.bounds_; }
  bool operator==(const BoundPattern& o) const { return same_bounds(o) && kind_ == o.kind_; }

  /// "{e11: 0, e12: -inf, ...}"
  std::string to_string() const;

 private:
  BoundPattern(QPtr q, std::vector<ExtInt> bounds, PatternKind kind);

  QPtr parent_;
  std::vector<ExtInt> bounds_;
  PatternKind kind_;
  std::shared_ptr<const BoundPattern> ambient_;
};

struct PatternReport {
  bool pass = true;
  std::vector<std::string> witnesses;
};

/// Checks the closure inequalities of the pattern's kind.
PatternReport validate_pattern(const BoundPattern& p);

/// Every homogeneous h of Q has h in R or h^-1 in R. Throws KindMismatch on ideals.
bool is_g_total(const BoundPattern& r);
/// h R_t(h) h^-1 = R_s(h) for every homogeneous h. Throws KindMismatch on ideals.
bool is_g_stable(const BoundPattern& r);
bool is_g_valuation_ring(const BoundPattern& r);

/// Nonzero scalars used by windowed scans: u * p^m with u in {1, p-1} and m in
/// [-window, window] for p-adic fields, a fixed spread of values otherwise.
std::vector<Scalar> window_scalars(const FieldDescriptor& field, int window);

/// Least fixpoint of the ideal closure rules starting from the given bounds:
/// m_gh <- min(m_gh, b_g + m_h + w(alpha)) for left closure and
/// m_gh <- min(m_gh, m_g + b_h + w(alpha)) for right closure.
/// Throws DivergentClosure if the result leaves the ring.
std::vector<ExtInt> close_bounds(const BoundPattern& ring, std::vector<ExtInt> start, Side side);

/// Smallest homogeneous ideal containing every homogeneous component of the
/// generators. Throws NotMember if a generator is outside the ring.
BoundPattern generated_ideal(const BoundPattern& ring, const std::vector<GradedElement>& generators, Side side);
BoundPattern principal_ideal(const BoundPattern& ring, const GradedElement& h, Side side);

/// First generator p^m u_g, scanned in (name, m) order with m in
/// [-window, window], whose ideal on the given side equals I.
std::optional<GradedElement> is_cyclic(const BoundPattern& ideal, Side side, int window = 6);

enum class Relation { Equal, Less, Greater, Incomparable };
std::string to_string(Relation r);

struct IdealComparison {
  /// Less means I is contained in J.
  Relation relation = Relation::Equal;
  /// Components where I is not inside J, and where J is not inside I.
  std::vector<Index> i_not_in_j;
  std::vector<Index> j_not_in_i;
};

/// Componentwise comparison. When the ambient ring is G-total and both
/// patterns are valid ideals, the totality implication between components
/// with a shared target (left) or source (right) is checked as well; a
/// violation is an internal error (std::logic_error).
IdealComparison ideal_compare(const BoundPattern& i, const BoundPattern& j);

struct Positives {
  /// p_g: least value of a member of R_g whose G-inverse leaves R.
  std::vector<ExtInt> generators;
  /// The two-sided ideal M they generate.
  BoundPattern ideal;
};

/// Throws NotTotal unless the ring is G-total.
Positives positives(const BoundPattern& ring);

struct ResidueSkewfield {
  QPtr skewfield;
  /// Element of G' (index in the residue groupoid) -> element of G.
  std::vector<Index> support;
  /// Maps a homogeneous member of R in a support degree to R/M.
  GradedElement reduce(const BoundPattern& ring, Index g, const Scalar& c) const;
};

/// R/M over the residue field, supported on G' = {g : p_g = succ(b_g), b_g finite}.
/// Throws NotTotal, LengthViolation or HypothesisViolation (empty support).
ResidueSkewfield residue_skewfield(const BoundPattern& ring);

/// R_g R_h = R_gh on every composable pair.
bool is_strongly_graded(const BoundPattern& ring);
/// One idempotent per connected component, the lowest index in each.
std::vector<Index> component_representatives(const Groupoid& g);
/// Extends ideals I_e of R_e (one per representative) to the homogeneous
/// ideal they determine. Throws NotStrong.
BoundPattern extend_component_ideals(const BoundPattern& ring, const std::map<Index, ExtInt>& component_bounds);
std::map<Index, ExtInt> restrict_component_ideals(const BoundPattern& ideal);
/// Intersection of the G-maximal ideals: succ(b_e) in every component.
BoundPattern g_jacobson_radical(const BoundPattern& ring);

}  // namespace gradval
