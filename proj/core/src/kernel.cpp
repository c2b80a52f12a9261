#include "dualk/kernel.hpp"

#include <cmath>
#include <string>

#include "dualk/error.hpp"

namespace dualk {
namespace {

void check_theta(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidArgument("theta must lie in (0, 1), got " + std::to_string(theta));
}

long double dot(std::span<const double> x, std::span<const double> y) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) acc += static_cast<long double>(x[i]) * y[i];
  return acc;
}

long double squared_distance(std::span<const double> x, std::span<const double> y) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const long double t = static_cast<long double>(x[i]) - y[i];
    acc += t * t;
  }
  return acc;
}

long double ipow(long double base, int exponent) {
  long double r = 1.0L;
  for (int i = 0; i < exponent; ++i) r *= base;
  return r;
}

// Shared by kernel_eval and kernel_matrix so both give identical bits.
double eval_unchecked(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  switch (spec.family()) {
    case KernelFamily::HomogeneousPoly:
      return static_cast<double>(ipow(spec.theta() * dot(x, y), spec.degree()));
    case KernelFamily::InhomogeneousPoly:
      return static_cast<double>(ipow(spec.theta() * dot(x, y) + 1.0L, spec.degree()));
    case KernelFamily::Gaussian: {
      const long double w = spec.width();
      return static_cast<double>(std::exp(-squared_distance(x, y) / (2.0L * w * w)));
    }
  }
  return 0.0;
}

}  // namespace

KernelSpec::KernelSpec(KernelFamily family, int degree, double theta, double width)
    : family_(family), degree_(degree), theta_(theta), width_(width) {}

KernelSpec KernelSpec::homogeneous(int degree, double theta) {
  check_theta(theta);
  if (degree < 0) throw InvalidArgument("kernel degree must be >= 0");
  return KernelSpec(KernelFamily::HomogeneousPoly, degree, theta, 0.0);
}

KernelSpec KernelSpec::inhomogeneous(int degree, double theta) {
  check_theta(theta);
  if (degree < 0) throw InvalidArgument("kernel degree must be >= 0");
  return KernelSpec(KernelFamily::InhomogeneousPoly, degree, theta, 0.0);
}

KernelSpec KernelSpec::gaussian(double width, double theta) {
  check_theta(theta);
  if (!(width > 0.0) || !std::isfinite(width)) throw InvalidArgument("gaussian width must be positive");
  return KernelSpec(KernelFamily::Gaussian, 1, theta, width);
}

KernelSpec KernelSpec::with_degree(int degree) const {
  if (!is_polynomial()) throw InvalidArgument("gaussian kernel has no degree to change");
  return family_ == KernelFamily::HomogeneousPoly ? homogeneous(degree, theta_) : inhomogeneous(degree, theta_);
}

const char* family_name(KernelFamily family) {
  switch (family) {
    case KernelFamily::HomogeneousPoly: return "hom";
    case KernelFamily::InhomogeneousPoly: return "inhom";
    case KernelFamily::Gaussian: return "gauss";
  }
  return "?";
}

KernelFamily parse_family(std::string_view name) {
  if (name == "hom") return KernelFamily::HomogeneousPoly;
  if (name == "inhom") return KernelFamily::InhomogeneousPoly;
  if (name == "gauss") return KernelFamily::Gaussian;
  throw InvalidArgument("unknown kernel family '" + std::string(name) + "'");
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw DimensionMismatch("kernel arguments have dimensions " + std::to_string(x.size()) + " and " +
                            std::to_string(y.size()));
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw InvalidArgument("non-finite kernel argument");
  return eval_unchecked(spec, x, y);
}

Matrix kernel_matrix(const KernelSpec& spec, const DataMatrix& x, const DataMatrix& y) {
  if (x.dim() != y.dim())
    throw DimensionMismatch("point sets have dimensions " + std::to_string(x.dim()) + " and " +
                            std::to_string(y.dim()));
  Matrix k(x.size(), y.size());
  for (Index i = 0; i < x.size(); ++i)
    for (Index j = 0; j < y.size(); ++j) k(i, j) = eval_unchecked(spec, x.point(i), y.point(j));
  return k;
}

Matrix hadamard_step(const Matrix& prev, const Matrix& base) {
  if (prev.rows() != base.rows() || prev.cols() != base.cols())
    throw DimensionMismatch("hadamard operands have different shapes");
  return prev.cwiseProduct(base);
}

}  // namespace dualk
