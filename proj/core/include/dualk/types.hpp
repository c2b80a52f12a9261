#pragma once

#include <Eigen/Dense>

#include <initializer_list>
#include <span>

namespace dualk {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// N points of dimension n stored one per row. N may be zero (an empty batch),
// n may not. Entries are always finite.
class DataMatrix {
 public:
  explicit DataMatrix(PointMatrix values);
  DataMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DataMatrix empty(Index dim);

  Index size() const { return values_.rows(); }
  Index dim() const { return values_.cols(); }
  bool is_empty() const { return values_.rows() == 0; }

  std::span<const double> point(Index i) const {
    return {values_.data() + i * values_.cols(), static_cast<std::size_t>(values_.cols())};
  }
  const PointMatrix& values() const { return values_; }

  DataMatrix select(std::span<const Index> rows) const;

  friend bool operator==(const DataMatrix& a, const DataMatrix& b) {
    return a.values_.rows() == b.values_.rows() && a.values_.cols() == b.values_.cols() &&
           a.values_ == b.values_;
  }

 private:
  PointMatrix values_;
};

}  // namespace dualk
