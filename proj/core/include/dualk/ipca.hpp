#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dualk/feature.hpp"
#include "dualk/kernel.hpp"
#include "dualk/types.hpp"

namespace dualk {

struct IpcaOptions {
  Index anchor_count = 0;
  // Unset: 1e-6 times the largest singular value.
  std::optional<double> epsilon;
  std::uint64_t seed = 0;
  std::optional<DataMatrix> anchors;
};

struct IpcaModel {
  KernelSpec spec;
  DataMatrix anchors;
  double epsilon;
  // Rows of V, descending singular value; every row is a feature.
  Matrix v;
  Vector sigma;
  std::vector<Feature> features;
};

inline constexpr double kDefaultRelativeEpsilon = 1e-6;

IpcaModel ipca_fit(const DataMatrix& x, const KernelSpec& spec, const IpcaOptions& options);

// Rows are points, columns features in model order.
Matrix ipca_eval(const IpcaModel& model, const DataMatrix& x);

// Rebuilds the feature registry from v / sigma / epsilon.
std::vector<Feature> ipca_features(const Matrix& v, const Vector& sigma, double epsilon, int degree);

}  // namespace dualk
