#include "dualk/anchors.hpp"

#include <algorithm>
#include <cmath>

#include "dualk/error.hpp"

namespace dualk {

DataMatrix sample_anchors(const DataMatrix& x, Index count, Rng& rng) {
  if (count < 1) throw InvalidArgument("anchor count must be >= 1");
  if (x.is_empty()) throw InvalidArgument("cannot place anchors around an empty point set");
  const auto& v = x.values();
  const Eigen::RowVectorXd lo = v.colwise().minCoeff();
  const Eigen::RowVectorXd hi = v.colwise().maxCoeff();
  const Eigen::RowVectorXd center = (lo + hi) / 2.0;
  Eigen::RowVectorXd half = (hi - lo) / 2.0;

  // Zero-width axes borrow the widest axis, a single point gets a unit-scale box.
  const double widest = half.maxCoeff();
  const double fallback = widest > 0.0 ? widest : std::max(1.0, center.cwiseAbs().maxCoeff());
  for (Index j = 0; j < half.size(); ++j)
    if (!(half(j) > 1e-12 * fallback)) half(j) = fallback;
  half *= 1.5;

  PointMatrix y(count, x.dim());
  for (Index i = 0; i < count; ++i)
    for (Index j = 0; j < x.dim(); ++j) y(i, j) = rng.uniform(center(j) - half(j), center(j) + half(j));
  return DataMatrix(std::move(y));
}

}  // namespace dualk
