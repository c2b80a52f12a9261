#pragma once

// Explicit monomial-basis view of the polynomial kernels, for checking the
// implicit kernel computations at small n and d.

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "dualk/kernel.hpp"
#include "dualk/types.hpp"

namespace dualk::poly {

struct Monomial {
  std::vector<int> exponents;

  int total_degree() const;
  std::size_t dim() const { return exponents.size(); }
  double evaluate(std::span<const double> p) const;
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

Monomial operator*(const Monomial& a, const Monomial& b);

// Graded lexicographic: lower total degree first, then lexicographic with X1 > X2 > ...
struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

class PolyVector {
 public:
  explicit PolyVector(std::size_t dim) : dim_(dim) {}

  static PolyVector constant(std::size_t dim, double value);
  static PolyVector variable(std::size_t dim, std::size_t i);

  std::size_t dim() const { return dim_; }
  int max_degree() const;
  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, double, GrlexLess>& terms() const { return terms_; }

  double coefficient(const Monomial& m) const;
  // Adds c to the coefficient of m; exact zeros are removed.
  void add(const Monomial& m, double c);
  double evaluate(std::span<const double> p) const;
  // Euclidean norm of the coefficient vector.
  double coefficient_norm() const;

  PolyVector& operator+=(const PolyVector& other);
  PolyVector& operator*=(double s);
  friend PolyVector operator+(PolyVector a, const PolyVector& b) { return a += b; }
  friend PolyVector operator-(PolyVector a, const PolyVector& b);
  friend PolyVector operator*(PolyVector a, double s) { return a *= s; }
  friend PolyVector operator*(double s, PolyVector a) { return a *= s; }
  friend PolyVector operator*(const PolyVector& a, const PolyVector& b);

 private:
  std::size_t dim_;
  std::map<Monomial, double, GrlexLess> terms_;
};

enum class DegreeMode { ExactDegree, UpToDegree };

std::size_t dim_poly_space(int n, int d, DegreeMode mode);

// All monomials in n variables of degree exactly d, or at most d, in grlex order.
std::vector<Monomial> monomials(int n, int d, DegreeMode mode);

// Multinomial coefficient d! / (a_1! ... a_n! (d-|a|)!).
double multinomial(const Monomial& a, int d);

// <X^a, X^b> for the scalar product under which k_{<=d}(., y) reproduces
// (inhomogeneous weights; they coincide with the homogeneous ones when |a| = d).
double monomial_inner_product(const Monomial& a, const Monomial& b, double theta, int d);
double poly_inner_product(const PolyVector& f, const PolyVector& g, double theta, int d);

struct FeatureVector {
  std::vector<Monomial> index;
  Vector values;
};

// Explicit feature map with dot(feature_map(x), feature_map(y)) = k(x, y).
FeatureVector feature_map(std::span<const double> x, const KernelSpec& spec);

// k(y, X) expanded in the monomial basis.
PolyVector kernel_as_poly(const KernelSpec& spec, std::span<const double> y);

double evaluate_poly(const PolyVector& f, std::span<const double> p);

// Rows are the polys, columns the given monomials.
Matrix coefficient_matrix(std::span<const PolyVector> polys, const std::vector<Monomial>& basis);
// Union of the supports of the polys, grlex sorted.
std::vector<Monomial> support(std::span<const PolyVector> polys);

inline constexpr double kRankTolerance = 1e-8;

std::size_t span_rank(std::span<const PolyVector> polys);

// Basis of the degree <= d polynomials vanishing on every sample point.
std::vector<PolyVector> vanishing_slice(const DataMatrix& sample, int d);

// Largest principal angle of span(inner) against span(outer), i.e. how far the
// first span is from being contained in the second. Spans are rank-truncated at
// kRankTolerance relative to their largest singular value, or to `inner_scale`
// for the inner span when it is positive. An inner span of rank 0 is contained
// in anything (angle 0).
double containment_angle(std::span<const PolyVector> inner, std::span<const PolyVector> outer,
                         double inner_scale = 0.0);

// Largest principal angle between two spans of equal rank; pi/2 when the ranks
// differ or either span is empty.
double subspace_gap(std::span<const PolyVector> a, std::span<const PolyVector> b);

}  // namespace dualk::poly
