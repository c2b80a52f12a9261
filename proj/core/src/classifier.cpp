#include "dualk/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "dualk/error.hpp"
#include "dualk/rng.hpp"

namespace dualk {

std::vector<int> LabeledDataset::classes() const {
  std::set<int> ids(labels.begin(), labels.end());
  return {ids.begin(), ids.end()};
}

DataMatrix LabeledDataset::class_points(int label) const {
  std::vector<Index> rows;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) rows.push_back(static_cast<Index>(i));
  return points.select(rows);
}

double logarithmic_mean_threshold(const Vector& singular_values) {
  if (singular_values.size() == 0) throw InvalidArgument("empty spectrum");
  const double hi = singular_values.maxCoeff();
  if (!(hi > 0.0)) throw InvalidArgument("spectrum has no positive singular value");
  const double lo = std::max(singular_values.minCoeff(), std::numeric_limits<double>::epsilon() * hi);
  if (hi - lo <= std::numeric_limits<double>::epsilon() * hi) return hi;
  return (hi - lo) / std::log(hi / lo);
}

OneVsAllModel train_one_vs_all(const LabeledDataset& data, const KernelSpec& spec, const OneVsAllOptions& options) {
  if (static_cast<Index>(data.labels.size()) != data.points.size())
    throw InvalidArgument("label count " + std::to_string(data.labels.size()) + " does not match point count " +
                          std::to_string(data.points.size()));
  const auto ids = data.classes();
  if (ids.size() < 2) throw InvalidArgument("one-vs-all training needs at least two classes");
  if (options.anchor_cap < 1) throw InvalidArgument("anchor cap must be >= 1");
  if (const auto* fixed = std::get_if<FixedEpsilon>(&options.epsilon_rule))
    if (!(fixed->value > 0.0)) throw InvalidArgument("epsilon must be > 0");

  Rng rng(options.seed);
  Rng pool_rng = rng.split("anchor-pool");
  const Index pool_size = std::min(data.points.size(), options.anchor_cap);
  auto picked = pool_rng.sample_without_replacement(data.points.size(), pool_size);
  std::sort(picked.begin(), picked.end());
  DataMatrix pool = data.points.select(picked);

  OneVsAllModel model{spec, pool, options.max_degree, {}};
  for (int id : ids) {
    const DataMatrix points = data.class_points(id);
    AvicaOptions fit;
    fit.max_degree = options.max_degree;
    fit.seed = options.seed;
    fit.anchors = pool;
    if (const auto* fixed = std::get_if<FixedEpsilon>(&options.epsilon_rule)) {
      fit.epsilon = fixed->value;
    } else {
      const Matrix k1 = kernel_matrix(spec, points, pool);
      fit.epsilon = logarithmic_mean_threshold(Eigen::BDCSVD<Matrix>(k1).singularValues());
    }
    model.class_models.emplace(id, avica_fit(points, spec, fit));
  }
  return model;
}

Matrix generative_l1_scores(const OneVsAllModel& model, const DataMatrix& x) {
  Matrix scores = Matrix::Zero(x.size(), static_cast<Index>(model.class_models.size()));
  Index col = 0;
  for (const auto& [id, cm] : model.class_models) {
    Index count = 0;
    for (const auto& layer : avica_eval(cm, x)) {
      scores.col(col) += layer.generative.cwiseAbs().rowwise().sum();
      count += layer.generative.cols();
    }
    if (count == 0) scores.col(col).setConstant(std::numeric_limits<double>::infinity());
    ++col;
  }
  return scores;
}

std::vector<int> classify_batch(const OneVsAllModel& model, const DataMatrix& x) {
  if (x.dim() != model.anchor_pool.dim())
    throw DimensionMismatch("model expects dimension " + std::to_string(model.anchor_pool.dim()) +
                            ", input has " + std::to_string(x.dim()));
  bool any = false;
  for (const auto& [id, cm] : model.class_models)
    for (const auto& layer : cm.layers) any = any || layer.v_perp.rows() > 0;
  if (!any) throw NoGenerativeFeatures("no generative features learned, lower epsilon");

  const Matrix scores = generative_l1_scores(model, x);
  std::vector<int> ids;
  for (const auto& [id, cm] : model.class_models) ids.push_back(id);

  std::vector<int> out(static_cast<std::size_t>(x.size()));
  for (Index i = 0; i < x.size(); ++i) {
    Index best = 0;
    // Strict comparison keeps the lowest id on ties.
    for (Index c = 1; c < scores.cols(); ++c)
      if (scores(i, c) < scores(i, best)) best = c;
    out[static_cast<std::size_t>(i)] = ids[static_cast<std::size_t>(best)];
  }
  return out;
}

int classify(const OneVsAllModel& model, std::span<const double> x) {
  PointMatrix row(1, static_cast<Index>(x.size()));
  for (std::size_t j = 0; j < x.size(); ++j) row(0, static_cast<Index>(j)) = x[j];
  return classify_batch(model, DataMatrix(std::move(row))).front();
}

ClassificationReport classification_report(const OneVsAllModel& model, const LabeledDataset& test) {
  if (test.points.is_empty()) throw InvalidArgument("empty test set");
  if (static_cast<Index>(test.labels.size()) != test.points.size())
    throw InvalidArgument("label count does not match point count");
  const auto predicted = classify_batch(model, test.points);

  std::set<int> all(test.labels.begin(), test.labels.end());
  for (const auto& [id, cm] : model.class_models) all.insert(id);
  ClassificationReport report;
  report.classes.assign(all.begin(), all.end());
  const Index t = static_cast<Index>(report.classes.size());
  report.confusion = Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic>::Zero(t, t);
  auto pos = [&](int id) {
    return static_cast<Index>(std::lower_bound(report.classes.begin(), report.classes.end(), id) - report.classes.begin());
  };
  Index correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    report.confusion(pos(test.labels[i]), pos(predicted[i])) += 1;
    if (predicted[i] == test.labels[i]) ++correct;
  }
  report.accuracy = static_cast<double>(correct) / static_cast<double>(predicted.size());
  return report;
}

double evaluate_accuracy(const OneVsAllModel& model, const LabeledDataset& test) {
  return classification_report(model, test).accuracy;
}

}  // namespace dualk
