#pragma once

#include <span>
#include <string_view>

#include "dualk/types.hpp"

namespace dualk {

inline constexpr double kDefaultTheta = 0.70710678118654752440;

enum class KernelFamily { HomogeneousPoly, InhomogeneousPoly, Gaussian };

// Polynomial kernels:  homogeneous  (theta <x,y>)^d,
//                      inhomogeneous (theta <x,y> + 1)^d.
// Gaussian: exp(-|x-y|^2 / (2 width^2)). theta is carried for every family
// because the degree-stepping algorithms scale thresholds by it.
class KernelSpec {
 public:
  static KernelSpec homogeneous(int degree, double theta = kDefaultTheta);
  static KernelSpec inhomogeneous(int degree, double theta = kDefaultTheta);
  static KernelSpec gaussian(double width, double theta = kDefaultTheta);

  KernelFamily family() const { return family_; }
  int degree() const { return degree_; }
  double theta() const { return theta_; }
  double width() const { return width_; }
  bool is_polynomial() const { return family_ != KernelFamily::Gaussian; }

  // Same family and theta at another degree (polynomial only).
  KernelSpec with_degree(int degree) const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

 private:
  KernelSpec(KernelFamily family, int degree, double theta, double width);

  KernelFamily family_;
  int degree_;
  double theta_;
  double width_;
};

const char* family_name(KernelFamily family);
KernelFamily parse_family(std::string_view name);

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

// N x D matrix of kernel values between the rows of x and the rows of y.
Matrix kernel_matrix(const KernelSpec& spec, const DataMatrix& x, const DataMatrix& y);

// Entrywise product, the step k_{<=d-1} -> k_{<=d}.
Matrix hadamard_step(const Matrix& prev, const Matrix& base);

}  // namespace dualk
