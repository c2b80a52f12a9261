#pragma once

#include <iosfwd>

#include "dualk/avica.hpp"

namespace dualk {

struct GridAxis {
  double min;
  double max;
  Index steps;

  double at(Index i) const { return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1); }
};

struct LevelSetGrid {
  GridAxis x;
  GridAxis y;
  // values(iy, ix) is the feature at (x.at(ix), y.at(iy)).
  Matrix values;
  Feature feature;

  // Half-width of the level band, a tenth of the feature's singular value.
  double band() const { return feature.singular_value / 10.0; }
};

// Generative feature with the smallest quantum (first in informativity order).
const Feature& smallest_generative_feature(const AvicaModel& model);

// Values of one feature of the model at the given points.
Vector evaluate_feature(const AvicaModel& model, const Feature& feature, const DataMatrix& x);

LevelSetGrid level_set_grid(const AvicaModel& model, GridAxis x, GridAxis y);

void write_level_set_csv(std::ostream& out, const LevelSetGrid& grid);

}  // namespace dualk
