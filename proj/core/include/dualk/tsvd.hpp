#pragma once

#include <optional>

#include "dualk/types.hpp"

namespace dualk {

// K = U diag(S) V + U_perp diag(S_perp) V_perp with S >= epsilon > S_perp.
// Right singular vectors are stored as rows of V / V_perp, each signed so its
// largest-magnitude entry is positive.
struct ThresholdedSvd {
  Matrix u;
  Vector s;
  Matrix v;
  Matrix u_perp;
  Vector s_perp;
  Matrix v_perp;
  double epsilon = 0.0;

  Index rank() const { return s.size(); }
  double largest() const;
};

// Retains singular values >= epsilon. With a rank cap, at most `rank_cap`
// values are retained and S_perp may then hold values >= epsilon.
ThresholdedSvd thresholded_svd(const Matrix& k, double epsilon,
                               std::optional<Index> rank_cap = std::nullopt);

// U diag(S) V.
Matrix low_rank_project(const ThresholdedSvd& t);

}  // namespace dualk
