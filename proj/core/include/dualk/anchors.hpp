#pragma once

#include "dualk/rng.hpp"
#include "dualk/types.hpp"

namespace dualk {

// D points uniform on the bounding box of x, widened by 50% per axis.
DataMatrix sample_anchors(const DataMatrix& x, Index count, Rng& rng);

}  // namespace dualk
