#include "oracle_support.hpp"

namespace dualk::oracle {

using poly::PolyVector;

DataMatrix circle_points(Index count, double radius, std::uint64_t seed, double noise) {
  return generate({Circle{radius}, count, noise, seed}).points;
}

DataMatrix random_points(Index count, Index dim, Rng& rng, double lo, double hi) {
  PointMatrix m(count, dim);
  for (Index i = 0; i < count; ++i)
    for (Index j = 0; j < dim; ++j) m(i, j) = rng.uniform(lo, hi);
  return DataMatrix(std::move(m));
}

Matrix random_matrix(Index rows, Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.normal(0.0, 1.0);
  return m;
}

PolyVector circle_poly(double radius) {
  PolyVector p = PolyVector::variable(2, 0) * PolyVector::variable(2, 0) +
                 PolyVector::variable(2, 1) * PolyVector::variable(2, 1);
  p += PolyVector::constant(2, -radius * radius);
  return p;
}

PolyVector random_poly(std::size_t dim, int degree, Rng& rng) {
  PolyVector p(dim);
  for (const auto& m : poly::monomials(static_cast<int>(dim), degree, poly::DegreeMode::UpToDegree))
    p.add(m, rng.uniform(-1.0, 1.0));
  return p;
}

std::vector<PolyVector> column_polys(const AvicaModel& model, int degree) {
  const Index d_anchors = model.anchors.size();
  std::vector<PolyVector> base;
  for (Index j = 0; j < d_anchors; ++j) base.push_back(poly::kernel_as_poly(model.spec, model.anchors.point(j)));
  std::vector<PolyVector> current = base;
  for (int d = 2; d <= degree; ++d) {
    const Matrix& v = model.layers[static_cast<std::size_t>(d - 2)].v;
    const Matrix proj = v.transpose() * v;
    std::vector<PolyVector> next;
    for (Index j = 0; j < d_anchors; ++j) {
      PolyVector col = combine(current, proj.col(j));
      next.push_back(col * base[static_cast<std::size_t>(j)]);
    }
    current = std::move(next);
  }
  return current;
}

PolyVector combine(const std::vector<PolyVector>& polys, const Vector& alphas) {
  PolyVector out(polys.front().dim());
  for (std::size_t j = 0; j < polys.size(); ++j) out += polys[j] * alphas(static_cast<Index>(j));
  return out;
}

std::vector<PolyVector> generative_polys(const AvicaModel& model, int degree) {
  const auto cols = column_polys(model, degree);
  const auto& layer = model.layers[static_cast<std::size_t>(degree - 1)];
  std::vector<PolyVector> out;
  for (Index i = 0; i < layer.v_perp.rows(); ++i) out.push_back(combine(cols, layer.v_perp.row(i).transpose()));
  return out;
}

double expansion_scale(const std::vector<PolyVector>& columns) {
  const Matrix c = poly::coefficient_matrix(columns, poly::support(columns));
  return Eigen::JacobiSVD<Matrix>(c).singularValues()(0);
}

}  // namespace dualk::oracle
