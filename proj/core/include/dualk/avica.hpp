#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dualk/feature.hpp"
#include "dualk/kernel.hpp"
#include "dualk/types.hpp"

namespace dualk {

struct DegreeLayer {
  int degree = 1;
  double epsilon = 0.0;
  Matrix v;
  Vector s;
  // Generative directions only, descending singular value.
  Matrix v_perp;
  Vector s_perp;
  // Rejected directions whose kernel expansion is the zero function.
  Index dropped = 0;
};

struct AvicaOptions {
  int max_degree = 1;
  double epsilon = 0.0;
  // Unset: as many anchors as points.
  std::optional<Index> anchor_count;
  std::uint64_t seed = 0;
  std::optional<DataMatrix> anchors;
  // Optional per-degree caps on the retained rank (entry d-1 for degree d).
  std::vector<Index> rank_caps;
};

struct AvicaModel {
  KernelSpec spec;
  DataMatrix anchors;
  double epsilon;
  std::vector<Index> rank_caps;
  std::vector<DegreeLayer> layers;
  // Generative ascending by quantum, then discriminative descending.
  std::vector<Feature> features;

  int max_degree() const { return static_cast<int>(layers.size()); }
};

// Below this fraction of the degree's largest singular value a rejected
// direction counts as numerically zero on the data.
inline constexpr double kMachineZeroRelative = 1e-12;
// Numerically-zero directions are kept only if their values on the anchors
// exceed this fraction of the anchor kernel matrix norm.
inline constexpr double kAnchorZeroRelative = 1e-10;

AvicaModel avica_fit(const DataMatrix& x, const KernelSpec& spec, const AvicaOptions& options);

struct LayerEvaluation {
  int degree;
  Matrix discriminative;
  Matrix generative;
};

std::vector<LayerEvaluation> avica_eval(const AvicaModel& model, const DataMatrix& x);

struct DegreeProfile {
  int degree;
  Index discriminative;
  Index generative;
};

std::vector<DegreeProfile> feature_count_profile(const AvicaModel& model);

// Feature registry in informativity order, stable on (quantum, degree, index).
std::vector<Feature> informativity_order(std::span<const DegreeLayer> layers, double theta);

// 1e-6 times the largest singular value of k.
double default_epsilon(const Matrix& k);

}  // namespace dualk
