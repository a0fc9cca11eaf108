#pragma once

// Brute-force references for the test suites. Nothing here calls the closed
// forms under test; membership is only ever decided through BoundPattern::contains
// and inverses are built from products.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "gradval/graded.hpp"
#include "gradval/pattern.hpp"
#include "gradval/scenario.hpp"

namespace oracle {

using gradval::BoundPattern;
using gradval::ExtInt;
using gradval::GradedElement;
using gradval::Index;
using gradval::QPtr;
using gradval::Scalar;

std::filesystem::path corpus_dir();
gradval::Scenario corpus(const std::string& name);
std::vector<std::string> corpus_names();

/// p-adic exponent of a nonzero rational by repeated division.
std::int64_t padic(const mpq_class& x, long p);

/// n x n matrices of scalars, for k[Delta_n] with the trivial twist.
using Mat = std::vector<std::vector<Scalar>>;
Mat to_matrix(const GradedElement& x, std::size_t n);
Mat mat_mul(const Mat& a, const Mat& b);
bool mat_eq(const Mat& a, const Mat& b);
Index unit_index(const QPtr& q, std::size_t i, std::size_t j);

/// Hamilton quaternions over Q, coordinates (1, i, j, k).
struct Quat {
  mpq_class c[4];
  bool operator==(const Quat& o) const {
    return c[0] == o.c[0] && c[1] == o.c[1] && c[2] == o.c[2] && c[3] == o.c[3];
  }
};
Quat hamilton(const Quat& a, const Quat& b);
/// Reads an element of the Klein-graded ring with basis names 1, i, j, k.
Quat to_quat(const GradedElement& x);

/// Scalars with w in [-window, window]: p^m and (p-1) p^m, or a fixed spread
/// under the trivial valuation.
std::vector<Scalar> scan_scalars(const gradval::FieldDescriptor& f, int window);

/// Inverse of a nonzero homogeneous element, from h u_{g^-1} = d 1_{s(g)}.
GradedElement homogeneous_inverse(const GradedElement& h);

/// Literal definitions over the window.
bool scan_total(const BoundPattern& r, int window, std::string* witness = nullptr);
bool scan_stable(const BoundPattern& r, int window, std::string* witness = nullptr);
/// Least w-value in the window of a member of R_g whose inverse leaves R
/// (+inf when none is found).
ExtInt scan_positive_generator(const BoundPattern& r, Index g, int window);

/// Random valid subring pattern with bounds drawn from {-inf, -2..2, +inf}.
BoundPattern random_subring(const QPtr& q, std::mt19937_64& rng);

/// Connected classes by closing "t(g) = s(h) or t(h) = s(g) or same endpoints"
/// under transitivity, with no use of the library's partition.
std::vector<std::size_t> brute_components(const gradval::Groupoid& g);

mpq_class random_rational(std::mt19937_64& rng, int max_exp = 3, long p = 5);

}  // namespace oracle
