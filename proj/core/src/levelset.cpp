#include "dualk/levelset.hpp"

#include <ostream>
#include <string>

#include "dualk/csv.hpp"
#include "dualk/error.hpp"

namespace dualk {

const Feature& smallest_generative_feature(const AvicaModel& model) {
  for (const auto& f : model.features)
    if (f.label == FeatureLabel::Generative) return f;
  throw NoGenerativeFeatures("model has no generative features");
}

Vector evaluate_feature(const AvicaModel& model, const Feature& feature, const DataMatrix& x) {
  const auto layers = avica_eval(model, x);
  for (const auto& layer : layers) {
    if (layer.degree != feature.degree) continue;
    const Matrix& block = feature.label == FeatureLabel::Generative ? layer.generative : layer.discriminative;
    if (feature.index < 0 || feature.index >= block.cols()) break;
    return block.col(feature.index);
  }
  throw InvalidArgument("feature does not belong to the model");
}

LevelSetGrid level_set_grid(const AvicaModel& model, GridAxis x, GridAxis y) {
  if (model.anchors.dim() != 2) throw DimensionMismatch("level-set grids need a 2-dimensional model");
  if (x.steps < 2 || y.steps < 2) throw InvalidArgument("grid needs at least 2 steps per axis");
  if (!(x.max > x.min) || !(y.max > y.min)) throw InvalidArgument("grid ranges must have min < max");
  const Feature& f = smallest_generative_feature(model);

  PointMatrix pts(x.steps * y.steps, 2);
  for (Index iy = 0; iy < y.steps; ++iy)
    for (Index ix = 0; ix < x.steps; ++ix) {
      pts(iy * x.steps + ix, 0) = x.at(ix);
      pts(iy * x.steps + ix, 1) = y.at(iy);
    }
  const Vector values = evaluate_feature(model, f, DataMatrix(std::move(pts)));

  LevelSetGrid grid{x, y, Matrix(y.steps, x.steps), f};
  for (Index iy = 0; iy < y.steps; ++iy)
    for (Index ix = 0; ix < x.steps; ++ix) grid.values(iy, ix) = values(iy * x.steps + ix);
  return grid;
}

void write_level_set_csv(std::ostream& out, const LevelSetGrid& grid) {
  out << "# x_range," << format_double(grid.x.min) << ',' << format_double(grid.x.max) << ',' << grid.x.steps << '\n';
  out << "# y_range," << format_double(grid.y.min) << ',' << format_double(grid.y.max) << ',' << grid.y.steps << '\n';
  out << "# feature,degree=" << grid.feature.degree << ",index=" << grid.feature.index << '\n';
  out << "# s," << format_double(grid.feature.singular_value) << '\n';
  out << "# quantum," << format_double(grid.feature.quantum) << '\n';
  out << "# band," << format_double(-grid.band()) << ',' << format_double(grid.band()) << '\n';
  out << "x,y,value\n";
  for (Index iy = 0; iy < grid.y.steps; ++iy)
    for (Index ix = 0; ix < grid.x.steps; ++ix)
      out << format_double(grid.x.at(ix)) << ',' << format_double(grid.y.at(iy)) << ','
          << format_double(grid.values(iy, ix)) << '\n';
}

}  // namespace dualk
