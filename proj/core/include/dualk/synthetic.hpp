#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "dualk/types.hpp"

namespace dualk {

struct Circle {
  double radius;
};

// offset + t * direction, t uniform on [-extent, extent].
struct Line {
  std::vector<double> direction;
  std::vector<double> offset;
  double extent = 10.0;
};

struct UnionOfCircles {
  std::vector<double> radii;
};

// spreads[i] holds per-axis standard deviations for centers[i], or a single
// isotropic value.
struct Blobs {
  std::vector<std::vector<double>> centers;
  std::vector<std::vector<double>> spreads;
};

using Shape = std::variant<Circle, Line, UnionOfCircles, Blobs>;

// For multi-component shapes `count` is the number of points per component.
struct SyntheticSpec {
  Shape shape;
  Index count = 1;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

struct SyntheticData {
  DataMatrix points;
  // Component index per point; empty for single-component shapes.
  std::vector<int> labels;
};

SyntheticData generate(const SyntheticSpec& spec);

// 2 theta sqrt(2) sigma^2, the singular value expected from feature-space noise.
double circle_threshold(double theta, double noise_sigma);

}  // namespace dualk
