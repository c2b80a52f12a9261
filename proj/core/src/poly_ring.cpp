#include "dualk/poly_ring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "dualk/error.hpp"

namespace dualk::poly {
namespace {

long double factorial(int k) {
  long double r = 1.0L;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

void check_dims(std::size_t a, std::size_t b) {
  if (a != b)
    throw DimensionMismatch("polynomials in " + std::to_string(a) + " and " + std::to_string(b) + " variables");
}

void append_exact(int n, int d, std::vector<int>& current, int pos, std::vector<Monomial>& out) {
  if (pos == n - 1) {
    current[static_cast<std::size_t>(pos)] = d;
    out.push_back(Monomial{current});
    return;
  }
  for (int e = d; e >= 0; --e) {
    current[static_cast<std::size_t>(pos)] = e;
    append_exact(n, d - e, current, pos + 1, out);
  }
}

// Columns of the result span the row space of `rows`, truncated below `tol`.
Matrix orthonormal_span(const Matrix& rows, double tol) {
  if (rows.rows() == 0 || rows.cols() == 0) return Matrix(rows.cols(), 0);
  Eigen::JacobiSVD<Matrix> svd(rows.transpose(), Eigen::ComputeThinU);
  Index r = 0;
  while (r < svd.singularValues().size() && svd.singularValues()(r) > tol) ++r;
  return svd.matrixU().leftCols(r);
}

double largest_singular_value(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

std::vector<PolyVector> concat(std::span<const PolyVector> a, std::span<const PolyVector> b) {
  std::vector<PolyVector> all(a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  return all;
}

}  // namespace

int Monomial::total_degree() const {
  int s = 0;
  for (int e : exponents) s += e;
  return s;
}

double Monomial::evaluate(std::span<const double> p) const {
  check_dims(exponents.size(), p.size());
  long double r = 1.0L;
  for (std::size_t i = 0; i < exponents.size(); ++i)
    for (int k = 0; k < exponents[i]; ++k) r *= p[i];
  return static_cast<double>(r);
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  check_dims(a.dim(), b.dim());
  Monomial m{a.exponents};
  for (std::size_t i = 0; i < m.exponents.size(); ++i) m.exponents[i] += b.exponents[i];
  return m;
}

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
  const int da = a.total_degree();
  const int db = b.total_degree();
  if (da != db) return da < db;
  return a.exponents < b.exponents;
}

PolyVector PolyVector::constant(std::size_t dim, double value) {
  PolyVector p(dim);
  p.add(Monomial{std::vector<int>(dim, 0)}, value);
  return p;
}

PolyVector PolyVector::variable(std::size_t dim, std::size_t i) {
  if (i >= dim) throw InvalidArgument("variable index out of range");
  Monomial m{std::vector<int>(dim, 0)};
  m.exponents[i] = 1;
  PolyVector p(dim);
  p.add(m, 1.0);
  return p;
}

int PolyVector::max_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
  return d;
}

double PolyVector::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

void PolyVector::add(const Monomial& m, double c) {
  check_dims(dim_, m.dim());
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double PolyVector::evaluate(std::span<const double> p) const {
  check_dims(dim_, p.size());
  long double acc = 0.0L;
  for (const auto& [m, c] : terms_) acc += static_cast<long double>(c) * m.evaluate(p);
  return static_cast<double>(acc);
}

double PolyVector::coefficient_norm() const {
  long double acc = 0.0L;
  for (const auto& [m, c] : terms_) acc += static_cast<long double>(c) * c;
  return static_cast<double>(std::sqrt(acc));
}

PolyVector& PolyVector::operator+=(const PolyVector& other) {
  check_dims(dim_, other.dim_);
  for (const auto& [m, c] : other.terms_) add(m, c);
  return *this;
}

PolyVector& PolyVector::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

PolyVector operator-(PolyVector a, const PolyVector& b) {
  check_dims(a.dim_, b.dim_);
  for (const auto& [m, c] : b.terms_) a.add(m, -c);
  return a;
}

PolyVector operator*(const PolyVector& a, const PolyVector& b) {
  check_dims(a.dim_, b.dim_);
  PolyVector r(a.dim_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add(ma * mb, ca * cb);
  return r;
}

std::size_t dim_poly_space(int n, int d, DegreeMode mode) {
  if (n < 1) throw InvalidArgument("need n >= 1");
  if (d < 0) throw InvalidArgument("need d >= 0");
  // C(top, d) built incrementally; each partial product is itself a binomial.
  const std::uint64_t top = static_cast<std::uint64_t>(mode == DegreeMode::UpToDegree ? n + d : n + d - 1);
  const std::uint64_t k = static_cast<std::uint64_t>(d);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t factor = top - k + i;
    // r * factor / i is exact; divide out common factors first to delay overflow.
    const std::uint64_t g = std::gcd(r, i);
    const std::uint64_t scaled = factor / (i / g);
    if (__builtin_mul_overflow(r / g, scaled, &r)) throw InvalidArgument("dimension of polynomial space overflows");
  }
  return static_cast<std::size_t>(r);
}

std::vector<Monomial> monomials(int n, int d, DegreeMode mode) {
  if (n < 1 || d < 0) throw InvalidArgument("need n >= 1 and d >= 0");
  std::vector<Monomial> out;
  std::vector<int> current(static_cast<std::size_t>(n), 0);
  for (int e = (mode == DegreeMode::UpToDegree ? 0 : d); e <= d; ++e) append_exact(n, e, current, 0, out);
  std::sort(out.begin(), out.end(), GrlexLess{});
  return out;
}

double multinomial(const Monomial& a, int d) {
  const int total = a.total_degree();
  if (total > d) throw InvalidArgument("monomial degree exceeds d");
  long double denom = factorial(d - total);
  for (int e : a.exponents) denom *= factorial(e);
  return static_cast<double>(factorial(d) / denom);
}

double monomial_inner_product(const Monomial& a, const Monomial& b, double theta, int d) {
  check_dims(a.dim(), b.dim());
  if (a.total_degree() > d || b.total_degree() > d) throw InvalidArgument("monomial degree exceeds d");
  if (!(a == b)) return 0.0;
  return std::pow(theta, -a.total_degree()) / multinomial(a, d);
}

double poly_inner_product(const PolyVector& f, const PolyVector& g, double theta, int d) {
  check_dims(f.dim(), g.dim());
  if (f.max_degree() > d || g.max_degree() > d) throw InvalidArgument("polynomial degree exceeds d");
  long double acc = 0.0L;
  const auto& small = f.terms().size() <= g.terms().size() ? f : g;
  const auto& large = &small == &f ? g : f;
  for (const auto& [m, c] : small.terms()) {
    const double other = large.coefficient(m);
    if (other != 0.0) acc += static_cast<long double>(c) * other * monomial_inner_product(m, m, theta, d);
  }
  return static_cast<double>(acc);
}

FeatureVector feature_map(std::span<const double> x, const KernelSpec& spec) {
  if (!spec.is_polynomial()) throw InvalidArgument("gaussian kernel has no finite feature map");
  const int n = static_cast<int>(x.size());
  const int d = spec.degree();
  FeatureVector fv;
  fv.index = monomials(n, d, spec.family() == KernelFamily::HomogeneousPoly ? DegreeMode::ExactDegree
                                                                            : DegreeMode::UpToDegree);
  fv.values.resize(static_cast<Index>(fv.index.size()));
  for (std::size_t i = 0; i < fv.index.size(); ++i) {
    const Monomial& a = fv.index[i];
    const double gamma = std::sqrt(std::pow(spec.theta(), a.total_degree()) * multinomial(a, d));
    fv.values(static_cast<Index>(i)) = gamma * a.evaluate(x);
  }
  return fv;
}

PolyVector kernel_as_poly(const KernelSpec& spec, std::span<const double> y) {
  if (!spec.is_polynomial()) throw InvalidArgument("gaussian kernel has no polynomial expansion");
  const int n = static_cast<int>(y.size());
  const int d = spec.degree();
  PolyVector p(y.size());
  const auto mode = spec.family() == KernelFamily::HomogeneousPoly ? DegreeMode::ExactDegree : DegreeMode::UpToDegree;
  for (const Monomial& a : monomials(n, d, mode))
    p.add(a, std::pow(spec.theta(), a.total_degree()) * multinomial(a, d) * a.evaluate(y));
  return p;
}

double evaluate_poly(const PolyVector& f, std::span<const double> p) { return f.evaluate(p); }

Matrix coefficient_matrix(std::span<const PolyVector> polys, const std::vector<Monomial>& basis) {
  Matrix c = Matrix::Zero(static_cast<Index>(polys.size()), static_cast<Index>(basis.size()));
  for (std::size_t i = 0; i < polys.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j)
      c(static_cast<Index>(i), static_cast<Index>(j)) = polys[i].coefficient(basis[j]);
  return c;
}

std::vector<Monomial> support(std::span<const PolyVector> polys) {
  std::map<Monomial, bool, GrlexLess> seen;
  for (const auto& p : polys) {
    if (!polys.empty()) check_dims(p.dim(), polys.front().dim());
    for (const auto& [m, c] : p.terms()) seen[m] = true;
  }
  std::vector<Monomial> out;
  out.reserve(seen.size());
  for (const auto& [m, flag] : seen) out.push_back(m);
  return out;
}

std::size_t span_rank(std::span<const PolyVector> polys) {
  if (polys.empty()) return 0;
  const Matrix c = coefficient_matrix(polys, support(polys));
  if (c.size() == 0) return 0;
  const Vector s = Eigen::JacobiSVD<Matrix>(c).singularValues();
  if (s(0) == 0.0) return 0;
  std::size_t r = 0;
  while (r < static_cast<std::size_t>(s.size()) && s(static_cast<Index>(r)) > kRankTolerance * s(0)) ++r;
  return r;
}

std::vector<PolyVector> vanishing_slice(const DataMatrix& sample, int d) {
  const auto basis = monomials(static_cast<int>(sample.dim()), d, DegreeMode::UpToDegree);
  const Index m = static_cast<Index>(basis.size());
  Matrix e(sample.size(), m);
  for (Index i = 0; i < sample.size(); ++i)
    for (Index j = 0; j < m; ++j) e(i, j) = basis[static_cast<std::size_t>(j)].evaluate(sample.point(i));

  Vector scale = e.colwise().norm().transpose();
  for (Index j = 0; j < m; ++j)
    if (scale(j) == 0.0) scale(j) = 1.0;
  const Matrix scaled = e * scale.cwiseInverse().asDiagonal();

  Matrix v;
  Vector s;
  if (scaled.rows() == 0) {
    v = Matrix::Identity(m, m);
    s = Vector(0);
  } else {
    Eigen::JacobiSVD<Matrix> svd(scaled, Eigen::ComputeFullV);
    v = svd.matrixV();
    s = svd.singularValues();
  }
  Index rank = 0;
  while (rank < s.size() && s(rank) > kRankTolerance * s(0)) ++rank;

  std::vector<PolyVector> out;
  for (Index k = rank; k < m; ++k) {
    Vector coeffs = v.col(k).cwiseQuotient(scale);
    coeffs /= coeffs.norm();
    PolyVector p(static_cast<std::size_t>(sample.dim()));
    for (Index j = 0; j < m; ++j) p.add(basis[static_cast<std::size_t>(j)], coeffs(j));
    out.push_back(std::move(p));
  }
  return out;
}

double containment_angle(std::span<const PolyVector> inner, std::span<const PolyVector> outer, double inner_scale) {
  const auto all = concat(inner, outer);
  const auto basis = support(all);
  const Matrix a = coefficient_matrix(inner, basis);
  const Matrix b = coefficient_matrix(outer, basis);
  const double a_ref = inner_scale > 0.0 ? inner_scale : largest_singular_value(a);
  const Matrix qa = orthonormal_span(a, kRankTolerance * a_ref);
  if (qa.cols() == 0) return 0.0;
  const Matrix qb = orthonormal_span(b, kRankTolerance * largest_singular_value(b));
  if (qb.cols() == 0) return std::numbers::pi / 2;
  const Matrix residual = qa - qb * (qb.transpose() * qa);
  return std::asin(std::min(1.0, largest_singular_value(residual)));
}

double subspace_gap(std::span<const PolyVector> a, std::span<const PolyVector> b) {
  const std::size_t ra = span_rank(a);
  const std::size_t rb = span_rank(b);
  if (ra == 0 || ra != rb) return std::numbers::pi / 2;
  return std::max(containment_angle(a, b), containment_angle(b, a));
}

}  // namespace dualk::poly
