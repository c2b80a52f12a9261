#include "dualk/tsvd.hpp"

#include <cmath>

#include "dualk/error.hpp"

namespace dualk {

double ThresholdedSvd::largest() const {
  if (s.size() > 0) return s(0);
  if (s_perp.size() > 0) return s_perp(0);
  return 0.0;
}

ThresholdedSvd thresholded_svd(const Matrix& k, double epsilon, std::optional<Index> rank_cap) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("threshold must be finite and >= 0");
  if (!k.allFinite()) throw InvalidArgument("matrix has non-finite entries");
  if (rank_cap && *rank_cap < 0) throw InvalidArgument("rank cap must be >= 0");

  const Index n = k.rows();
  const Index d = k.cols();
  const Index m = std::min(n, d);

  Matrix u(n, m);
  Vector s(m);
  Matrix vt(m, d);
  if (m > 0) {
    Eigen::BDCSVD<Matrix> svd(k, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = svd.matrixU();
    s = svd.singularValues();
    vt = svd.matrixV().transpose();
    for (Index i = 0; i < m; ++i) {
      Index at = 0;
      vt.row(i).cwiseAbs().maxCoeff(&at);
      if (vt(i, at) < 0.0) {
        vt.row(i) *= -1.0;
        u.col(i) *= -1.0;
      }
    }
  }

  Index r = 0;
  while (r < m && s(r) >= epsilon) ++r;
  if (rank_cap) r = std::min(r, *rank_cap);

  ThresholdedSvd t;
  t.epsilon = epsilon;
  t.u = u.leftCols(r);
  t.s = s.head(r);
  t.v = vt.topRows(r);
  t.u_perp = u.rightCols(m - r);
  t.s_perp = s.tail(m - r);
  t.v_perp = vt.bottomRows(m - r);
  return t;
}

Matrix low_rank_project(const ThresholdedSvd& t) {
  if (t.rank() == 0) return Matrix::Zero(t.u.rows(), t.v.cols() > 0 ? t.v.cols() : t.v_perp.cols());
  return t.u * t.s.asDiagonal() * t.v;
}

}  // namespace dualk
