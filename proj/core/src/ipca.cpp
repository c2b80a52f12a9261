#include "dualk/ipca.hpp"

#include <cmath>
#include <string>

#include "dualk/anchors.hpp"
#include "dualk/error.hpp"
#include "dualk/rng.hpp"
#include "dualk/tsvd.hpp"

namespace dualk {

const char* label_name(FeatureLabel label) {
  return label == FeatureLabel::Generative ? "generative" : "discriminative";
}

std::vector<Feature> ipca_features(const Matrix& v, const Vector& sigma, double epsilon, int degree) {
  std::vector<Feature> out;
  out.reserve(static_cast<std::size_t>(v.rows()));
  for (Index i = 0; i < v.rows(); ++i) {
    Feature f;
    f.alphas = v.row(i).transpose();
    f.degree = degree;
    f.label = sigma(i) >= epsilon ? FeatureLabel::Discriminative : FeatureLabel::Generative;
    f.singular_value = sigma(i);
    f.quantum = sigma(i);
    f.index = i;
    out.push_back(std::move(f));
  }
  return out;
}

IpcaModel ipca_fit(const DataMatrix& x, const KernelSpec& spec, const IpcaOptions& options) {
  if (x.is_empty()) throw InvalidArgument("cannot fit on an empty point set");
  if (options.epsilon && (!(*options.epsilon >= 0.0) || !std::isfinite(*options.epsilon)))
    throw InvalidArgument("epsilon must be >= 0");

  Rng rng(options.seed);
  Rng anchor_rng = rng.split("anchors");
  DataMatrix y = [&] {
    if (options.anchors) {
      if (options.anchors->dim() != x.dim()) throw DimensionMismatch("anchors and data differ in dimension");
      if (options.anchors->is_empty()) throw InvalidArgument("anchor override is empty");
      return *options.anchors;
    }
    if (options.anchor_count < 1) throw InvalidArgument("anchor count must be >= 1, got " + std::to_string(options.anchor_count));
    return sample_anchors(x, options.anchor_count, anchor_rng);
  }();

  const Matrix k = kernel_matrix(spec, x, y);
  // Split at epsilon only for labelling; every right singular vector is a feature.
  const ThresholdedSvd full = thresholded_svd(k, 0.0);
  const double epsilon = options.epsilon ? *options.epsilon : kDefaultRelativeEpsilon * full.largest();

  IpcaModel model{spec, std::move(y), epsilon, full.v, full.s, {}};
  model.features = ipca_features(model.v, model.sigma, epsilon, spec.degree());
  return model;
}

Matrix ipca_eval(const IpcaModel& model, const DataMatrix& x) {
  if (x.dim() != model.anchors.dim())
    throw DimensionMismatch("model expects dimension " + std::to_string(model.anchors.dim()) + ", input has " +
                            std::to_string(x.dim()));
  return kernel_matrix(model.spec, x, model.anchors) * model.v.transpose();
}

}  // namespace dualk
