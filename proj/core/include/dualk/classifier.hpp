#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <variant>
#include <vector>

#include "dualk/avica.hpp"
#include "dualk/kernel.hpp"
#include "dualk/types.hpp"

namespace dualk {

struct LabeledDataset {
  DataMatrix points;
  std::vector<int> labels;

  // Sorted distinct class ids.
  std::vector<int> classes() const;
  DataMatrix class_points(int label) const;
};

struct FixedEpsilon {
  double value;
};

// Logarithmic mean (a - b) / ln(a / b) of the largest singular value a of the
// class's degree-1 kernel matrix and its smallest b, floored at machine
// precision relative to a.
struct LogMeanSpectrum {};

using EpsilonRule = std::variant<FixedEpsilon, LogMeanSpectrum>;

double logarithmic_mean_threshold(const Vector& singular_values);

struct OneVsAllOptions {
  int max_degree = 1;
  EpsilonRule epsilon_rule = LogMeanSpectrum{};
  std::uint64_t seed = 0;
  Index anchor_cap = 200;
};

struct OneVsAllModel {
  KernelSpec spec;
  DataMatrix anchor_pool;
  int max_degree;
  std::map<int, AvicaModel> class_models;
};

OneVsAllModel train_one_vs_all(const LabeledDataset& data, const KernelSpec& spec,
                               const OneVsAllOptions& options);

int classify(const OneVsAllModel& model, std::span<const double> x);
std::vector<int> classify_batch(const OneVsAllModel& model, const DataMatrix& x);

// Rows are points, columns classes (ascending id); +inf for a class without
// generative features.
Matrix generative_l1_scores(const OneVsAllModel& model, const DataMatrix& x);

double evaluate_accuracy(const OneVsAllModel& model, const LabeledDataset& test);

struct ClassificationReport {
  std::vector<int> classes;
  // counts(i, j): points of class i predicted as class j.
  Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic> confusion;
  double accuracy;
};

ClassificationReport classification_report(const OneVsAllModel& model, const LabeledDataset& test);

}  // namespace dualk
