#include "dualk/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dualk/error.hpp"
#include "dualk/rng.hpp"

namespace dualk {
namespace {

struct Builder {
  PointMatrix points;
  std::vector<int> labels;
  Index next = 0;
};

void add_circle(Builder& b, double radius, Index count, int label, Rng& rng) {
  if (!(radius > 0.0)) throw InvalidArgument("circle radius must be > 0");
  for (Index i = 0; i < count; ++i) {
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    b.points(b.next, 0) = radius * std::cos(phi);
    b.points(b.next, 1) = radius * std::sin(phi);
    b.labels.push_back(label);
    ++b.next;
  }
}

}  // namespace

double circle_threshold(double theta, double noise_sigma) {
  if (!(theta > 0.0)) throw InvalidArgument("theta must be > 0");
  if (!(noise_sigma >= 0.0)) throw InvalidArgument("noise sigma must be >= 0");
  return 2.0 * theta * std::numbers::sqrt2 * noise_sigma * noise_sigma;
}

SyntheticData generate(const SyntheticSpec& spec) {
  if (spec.count < 1) throw InvalidArgument("point count must be >= 1");
  if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma)) throw InvalidArgument("noise sigma must be >= 0");
  Rng root(spec.seed);
  Rng shape_rng = root.split("shape");
  Rng noise_rng = root.split("noise");

  Builder b;
  bool multi = false;
  if (const auto* c = std::get_if<Circle>(&spec.shape)) {
    b.points.resize(spec.count, 2);
    add_circle(b, c->radius, spec.count, 0, shape_rng);
  } else if (const auto* u = std::get_if<UnionOfCircles>(&spec.shape)) {
    if (u->radii.empty()) throw InvalidArgument("union of circles needs at least one radius");
    multi = true;
    b.points.resize(spec.count * static_cast<Index>(u->radii.size()), 2);
    for (std::size_t k = 0; k < u->radii.size(); ++k) add_circle(b, u->radii[k], spec.count, static_cast<int>(k), shape_rng);
  } else if (const auto* l = std::get_if<Line>(&spec.shape)) {
    const std::size_t n = l->direction.size();
    if (n == 0) throw InvalidArgument("line direction is empty");
    const std::vector<double> offset = l->offset.empty() ? std::vector<double>(n, 0.0) : l->offset;
    if (offset.size() != n) throw DimensionMismatch("line offset and direction differ in dimension");
    if (!(l->extent > 0.0)) throw InvalidArgument("line extent must be > 0");
    b.points.resize(spec.count, static_cast<Index>(n));
    for (Index i = 0; i < spec.count; ++i) {
      const double t = shape_rng.uniform(-l->extent, l->extent);
      for (std::size_t j = 0; j < n; ++j) b.points(i, static_cast<Index>(j)) = offset[j] + t * l->direction[j];
    }
  } else {
    const auto& blobs = std::get<Blobs>(spec.shape);
    if (blobs.centers.empty()) throw InvalidArgument("blobs need at least one center");
    if (blobs.spreads.size() != blobs.centers.size()) throw InvalidArgument("one spread entry per blob center required");
    multi = true;
    const std::size_t n = blobs.centers.front().size();
    if (n == 0) throw InvalidArgument("blob centers are empty");
    b.points.resize(spec.count * static_cast<Index>(blobs.centers.size()), static_cast<Index>(n));
    for (std::size_t k = 0; k < blobs.centers.size(); ++k) {
      const auto& center = blobs.centers[k];
      const auto& spread = blobs.spreads[k];
      if (center.size() != n) throw DimensionMismatch("blob centers differ in dimension");
      if (spread.size() != 1 && spread.size() != n) throw DimensionMismatch("blob spread must have 1 or n entries");
      for (Index i = 0; i < spec.count; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const double sd = spread.size() == 1 ? spread[0] : spread[j];
          if (!(sd >= 0.0)) throw InvalidArgument("blob spreads must be >= 0");
          b.points(b.next, static_cast<Index>(j)) = shape_rng.normal(center[j], sd);
        }
        b.labels.push_back(static_cast<int>(k));
        ++b.next;
      }
    }
  }

  for (Index i = 0; i < b.points.rows(); ++i)
    for (Index j = 0; j < b.points.cols(); ++j) b.points(i, j) += noise_rng.normal(0.0, spec.noise_sigma);

  SyntheticData out{DataMatrix(std::move(b.points)), {}};
  if (multi) out.labels = std::move(b.labels);
  return out;
}

}  // namespace dualk
