#include <cmath>
#include <string>

#include "dualk/error.hpp"
#include "dualk/types.hpp"

namespace dualk {

DataMatrix::DataMatrix(PointMatrix values) : values_(std::move(values)) {
  if (values_.cols() < 1) throw InvalidArgument("data matrix needs ambient dimension >= 1");
  if (!values_.allFinite()) throw InvalidArgument("data matrix has non-finite entries");
}

DataMatrix::DataMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  const Index n = rows.size() == 0 ? 0 : static_cast<Index>(rows.begin()->size());
  PointMatrix m(static_cast<Index>(rows.size()), n);
  Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Index>(row.size()) != n)
      throw DimensionMismatch("ragged row " + std::to_string(i) + " in data matrix");
    Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  *this = DataMatrix(std::move(m));
}

DataMatrix DataMatrix::empty(Index dim) { return DataMatrix(PointMatrix(0, dim)); }

DataMatrix DataMatrix::select(std::span<const Index> rows) const {
  PointMatrix m(static_cast<Index>(rows.size()), dim());
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Index>(i)) = values_.row(rows[i]);
  return DataMatrix(std::move(m));
}

}  // namespace dualk
