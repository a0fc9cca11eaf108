#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gradval/graded.hpp"
#include "gradval/groupoid.hpp"
#include "gradval/pattern.hpp"

namespace gradval {

/// Canonical form of an element of Omega = H(Q)* / H(R)*: the orbit
/// representative degree and the value offset, normalised modulo the
/// orbit's loop subgroup.
struct OmegaClass {
  Index rep = 0;
  std::int64_t offset = 0;
  auto operator<=>(const OmegaClass&) const = default;
};

/// An element of Gamma or infinity. Terms map a class of G-bar (or of G for
/// an explicitly ordered groupoid) to its coefficient.
struct GammaValue {
  bool infinite = false;
  std::map<std::size_t, OmegaClass> terms;

  static GammaValue infinity() { return GammaValue{true, {}}; }
  bool is_single() const { return !infinite && terms.size() == 1; }
  bool operator==(const GammaValue&) const = default;
};

/// A G-valuation v: Q -> Gamma ∪ {inf}.
class Valuation {
 public:
  virtual ~Valuation() = default;

  virtual const QPtr& parent() const = 0;
  virtual GammaValue value(const GradedElement& x) const = 0;
  /// v(c u_g) for any c with w(c) = x.
  virtual GammaValue value_of_homogeneous(Index g, std::int64_t x) const = 0;
  virtual bool ge(const GammaValue& a, const GammaValue& b) const = 0;
  /// Product of single-term values; nullopt when undefined.
  virtual std::optional<GammaValue> product(const GammaValue& a, const GammaValue& b) const = 0;
  virtual std::string render(const GammaValue& a) const = 0;

  bool gt(const GammaValue& a, const GammaValue& b) const { return ge(a, b) && !(a == b); }
  bool comparable(const GammaValue& a, const GammaValue& b) const { return ge(a, b) || ge(b, a); }
};

/// Orbit of the two-sided R-unit action on (degree, value) pairs.
struct OmegaOrbit {
  Index rep = 0;
  std::vector<Index> degrees;
  /// Generator of the loop subgroup: offsets are taken mod loop (0 = exact).
  std::int64_t loop = 0;
};

/// The valuation constructed from a G-valuation ring R: Gamma built from the
/// value groupoid Omega and the comparability quotient G-bar.
class CanonicalValuation : public Valuation {
 public:
  /// Throws NotGValuationRing unless R is a G-total, G-stable subring.
  explicit CanonicalValuation(const BoundPattern& ring);

  const QPtr& parent() const override { return ring_.parent(); }
  const BoundPattern& ring() const { return ring_; }

  // Omega.
  OmegaClass omega(Index g, std::int64_t x) const;
  OmegaClass omega_of(const GradedElement& h) const;
  bool omega_ge(const OmegaClass& a, const OmegaClass& b) const;
  std::optional<OmegaClass> omega_product(const OmegaClass& a, const OmegaClass& b) const;
  const std::vector<OmegaOrbit>& orbits() const { return orbits_; }
  const OmegaOrbit& orbit_of(Index g) const { return orbits_[orbit_index_[g]]; }
  /// Base shift s_g of degree g inside its orbit.
  std::int64_t shift(Index g) const { return shift_[g]; }
  /// Classes of the 1_e, without repetition.
  std::vector<OmegaClass> omega_idempotents() const;
  std::string render_omega(const OmegaClass& w) const;

  // G-bar.
  const std::vector<std::vector<Index>>& gbar_classes() const { return gbar_classes_; }
  std::size_t gbar_of(Index g) const { return gbar_of_[g]; }
  bool gbar_lt(std::size_t c, std::size_t d) const { return gbar_lt_[c * gbar_classes_.size() + d]; }
  std::string gbar_name(std::size_t c) const;

  // Gamma.
  GammaValue value(const GradedElement& x) const override;
  GammaValue value_of_homogeneous(Index g, std::int64_t x) const override;
  bool ge(const GammaValue& a, const GammaValue& b) const override;
  std::optional<GammaValue> product(const GammaValue& a, const GammaValue& b) const override;
  std::string render(const GammaValue& a) const override;
  /// Distinct values v(1_e).
  std::vector<GammaValue> gamma_idempotents() const;

  /// Fault injection: makes omega_ge(a, b) false for this pair.
  void drop_comparability(const OmegaClass& a, const OmegaClass& b) { dropped_.insert({a, b}); }
  /// Relabels Omega offsets by a positive factor; an order isomorphism.
  void set_offset_scale(std::int64_t k);

 private:
  // Least w(r_s r_t) over nonzero homogeneous r_s, r_t in R with r_s u_from r_t
  // in degree to; nullopt when no such pair exists.
  std::optional<ExtInt> reach(Index from, Index to) const { return reach_[from * ring_.size() + to]; }
  OmegaClass decode(const OmegaClass& w) const;
  OmegaClass encode(const OmegaClass& w) const;

  BoundPattern ring_;
  std::vector<OmegaOrbit> orbits_;
  std::vector<std::size_t> orbit_index_;
  std::vector<std::int64_t> shift_;
  std::vector<std::optional<ExtInt>> reach_;
  std::vector<std::vector<Index>> gbar_classes_;
  std::vector<std::size_t> gbar_of_;
  std::vector<bool> gbar_lt_;
  std::set<std::pair<OmegaClass, OmegaClass>> dropped_;
  std::int64_t scale_ = 1;
};

/// The valuation attached to an explicit order on G: v(sum m_g u_g) is the
/// formal sum of w(m_g) g over the minimal elements of the support.
class OrderedGroupoidValuation : public Valuation {
 public:
  OrderedGroupoidValuation(QPtr q, GroupoidOrder order);

  const QPtr& parent() const override { return q_; }
  GammaValue value(const GradedElement& x) const override;
  GammaValue value_of_homogeneous(Index g, std::int64_t x) const override;
  bool ge(const GammaValue& a, const GammaValue& b) const override;
  std::optional<GammaValue> product(const GammaValue& a, const GammaValue& b) const override;
  std::string render(const GammaValue& a) const override;

 private:
  QPtr q_;
  GroupoidOrder order_;
};

/// a >= b in a formal-sum order: for every class c, a_c >= b_c or a_c' > b_c'
/// for some c' above c. Missing coefficients sit below everything.
template <typename ClassLt, typename CoefGe>
bool formal_sum_ge(const GammaValue& a, const GammaValue& b, std::size_t classes, ClassLt class_lt, CoefGe coef_ge) {
  if (a.infinite) return true;
  if (b.infinite) return false;
  auto coef_gt = [&](std::size_t c) {
    auto ia = a.terms.find(c);
    if (ia == a.terms.end()) return false;
    auto ib = b.terms.find(c);
    if (ib == b.terms.end()) return true;
    return ia->second != ib->second && coef_ge(ia->second, ib->second);
  };
  for (std::size_t c = 0; c < classes; ++c) {
    auto ia = a.terms.find(c);
    auto ib = b.terms.find(c);
    if (ib == b.terms.end()) continue;
    if (ia != a.terms.end() && coef_ge(ia->second, ib->second)) continue;
    bool rescued = false;
    for (std::size_t d = 0; d < classes && !rescued; ++d) {
      if (class_lt(c, d) && coef_gt(d)) rescued = true;
    }
    if (!rescued) return false;
  }
  return true;
}

/// Pattern of the ring generated by homogeneous h with v(h) >= v(t(h)) (T_v)
/// and with v(h) >= v(s(h)) (S_v).
std::pair<BoundPattern, BoundPattern> recover_rings(const Valuation& v);

/// Smallest subring pattern containing the given components and every 1_e.
BoundPattern subring_closure(const QPtr& q, std::vector<ExtInt> bounds);

std::vector<Scalar> sample_scalars(const FieldDescriptor& field, std::mt19937_64& rng, std::size_t count);
Scalar random_scalar(const FieldDescriptor& field, std::mt19937_64& rng);
GradedElement random_element(const QPtr& q, std::mt19937_64& rng, double density = 0.6);
/// Random nonzero element of the pattern (each component at most 2 above its bound).
GradedElement random_member(const BoundPattern& ring, std::mt19937_64& rng, double density = 0.6);
/// Random element outside the pattern.
GradedElement random_nonmember(const BoundPattern& ring, std::mt19937_64& rng);

struct AxiomCheck {
  std::string name;
  bool pass = true;
  std::size_t cases = 0;
  std::vector<std::string> witnesses;
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
};

struct AxiomOptions {
  int window = 6;
  std::size_t random_triples = 1000;
  std::uint64_t seed = 1;
};

/// Axioms (1)-(3), canonicity (4) and associativity of the underlying
/// multiplication on exhaustive homogeneous window pairs plus random triples.
/// Canonicity is reported separately for homogeneous elements ("canonical")
/// and for the random sums ("canonical-sums"); "defined" fails when v has no
/// value on a sampled element.
AxiomReport check_axioms(const Valuation& v, const AxiomOptions& options);

struct SetComparison {
  bool equal = true;
  std::size_t cases = 0;
  std::vector<std::string> witnesses;
};

/// {h in H(R) : h^-1 not in R} against {h in H(R) : v(h) > v(t(h))} over the window.
SetComparison positives_agree(const Valuation& v, const BoundPattern& ring, int window = 6);

struct EquivalenceReport {
  bool equivalent = false;
  /// Only meaningful when equivalent: the induced map respects order and products on the sample.
  bool map_consistent = true;
  std::size_t sampled = 0;
  std::vector<std::string> witnesses;
};

EquivalenceReport equivalent(const Valuation& v, const Valuation& w, int window = 3);

/// qRq^-1 for an invertible q, graded by the components q Q_g q^-1.
class ConjugateRing {
 public:
  /// Throws NotInvertible unless q is a unit of Q.
  ConjugateRing(const BoundPattern& ring, const GradedElement& q);

  bool contains(const GradedElement& y) const;
  /// q (c u_g) q^-1.
  GradedElement homogeneous(Index g, const Scalar& c) const;
  /// G-inverse in the transported grading.
  GradedElement transported_inverse(const GradedElement& y) const;
  bool is_g_total() const { return gradval::is_g_total(ring_); }
  bool is_g_stable() const { return gradval::is_g_stable(ring_); }
  const GradedElement& q() const { return q_; }
  const GradedElement& q_inverse() const { return q_inv_; }

 private:
  BoundPattern ring_;
  GradedElement q_;
  GradedElement q_inv_;
};

struct DubrovinReport {
  bool residue_simple_artinian = false;
  std::size_t residue_support = 0;
  bool gamma_is_group = false;
};

/// Checks the hypotheses of the full-support criterion (connected G with
/// trivial isotropy, every b_g <= 0, R a G-valuation ring) and the residue.
/// Throws HypothesisViolation when they fail.
DubrovinReport dubrovin_check(const BoundPattern& ring);

struct DubrovinWitness {
  GradedElement r;
  GradedElement r_prime;
  /// r x and x r' lie in R but not in M.
  bool verified = false;
};

/// For x outside R: r = r' = (a_d u_d)^-1 with v(a_d u_d) minimal.
DubrovinWitness dubrovin_witness(const BoundPattern& ring, const GradedElement& x);

}  // namespace gradval
