#include "dualk/avica.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dualk/anchors.hpp"
#include "dualk/error.hpp"
#include "dualk/ipca.hpp"
#include "dualk/rng.hpp"
#include "dualk/tsvd.hpp"

namespace dualk {
namespace {

struct Direction {
  Vector w;
  double sigma;
};

void fix_sign(Vector& w) {
  Index at = 0;
  w.cwiseAbs().maxCoeff(&at);
  if (w(at) < 0.0) w = -w;
}

// Rejected directions split into those with a real (if small) singular value
// and a degenerate cluster at roundoff level. The cluster's basis is arbitrary,
// so it is re-diagonalised by the feature values on the anchors: directions
// that also vanish on the anchors expand to the zero function and are dropped,
// the rest vanish on the data only and are generative.
std::vector<Direction> generative_directions(const ThresholdedSvd& t, const Matrix& kd, const Matrix& kyd,
                                             Index& dropped) {
  const double zero_cut = kMachineZeroRelative * t.largest();
  std::vector<Direction> out;
  std::vector<Index> cluster;
  for (Index i = 0; i < t.s_perp.size(); ++i) {
    if (t.s_perp(i) > 0.0 && t.s_perp(i) >= zero_cut)
      out.push_back({t.v_perp.row(i).transpose(), t.s_perp(i)});
    else
      cluster.push_back(i);
  }
  dropped = 0;
  if (!cluster.empty()) {
    Matrix w(static_cast<Index>(cluster.size()), t.v_perp.cols());
    for (std::size_t i = 0; i < cluster.size(); ++i) w.row(static_cast<Index>(i)) = t.v_perp.row(cluster[i]);
    const Matrix on_anchors = kyd * w.transpose();
    Eigen::BDCSVD<Matrix> svd(on_anchors, Eigen::ComputeThinV);
    const Matrix rotated = svd.matrixV().transpose() * w;
    const double anchor_cut = kAnchorZeroRelative * kyd.norm();
    const Vector& mu = svd.singularValues();
    for (Index i = 0; i < rotated.rows(); ++i) {
      if (i < mu.size() && mu(i) > anchor_cut) {
        Vector dir = rotated.row(i).transpose();
        fix_sign(dir);
        out.push_back({dir, (kd * dir).norm()});
      } else {
        ++dropped;
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Direction& a, const Direction& b) { return a.sigma > b.sigma; });
  return out;
}

}  // namespace

double default_epsilon(const Matrix& k) {
  if (k.size() == 0) throw InvalidArgument("empty kernel matrix");
  return kDefaultRelativeEpsilon * Eigen::BDCSVD<Matrix>(k).singularValues()(0);
}

std::vector<Feature> informativity_order(std::span<const DegreeLayer> layers, double theta) {
  std::vector<Feature> generative;
  std::vector<Feature> discriminative;
  for (const auto& layer : layers) {
    const double scale = std::pow(theta, layer.degree);
    for (Index i = 0; i < layer.v_perp.rows(); ++i)
      generative.push_back({layer.v_perp.row(i).transpose(), layer.degree, FeatureLabel::Generative,
                            layer.s_perp(i), layer.s_perp(i) * scale, i});
    for (Index i = 0; i < layer.v.rows(); ++i)
      discriminative.push_back({layer.v.row(i).transpose(), layer.degree, FeatureLabel::Discriminative,
                                layer.s(i), layer.s(i) * scale, i});
  }
  auto tie = [](const Feature& a, const Feature& b) {
    return a.degree != b.degree ? a.degree < b.degree : a.index < b.index;
  };
  std::stable_sort(generative.begin(), generative.end(), [&](const Feature& a, const Feature& b) {
    return a.quantum != b.quantum ? a.quantum < b.quantum : tie(a, b);
  });
  std::stable_sort(discriminative.begin(), discriminative.end(), [&](const Feature& a, const Feature& b) {
    return a.quantum != b.quantum ? a.quantum > b.quantum : tie(a, b);
  });
  generative.insert(generative.end(), std::make_move_iterator(discriminative.begin()),
                    std::make_move_iterator(discriminative.end()));
  return generative;
}

AvicaModel avica_fit(const DataMatrix& x, const KernelSpec& spec, const AvicaOptions& options) {
  if (options.max_degree < 1) throw InvalidArgument("max degree must be >= 1");
  if (!(options.epsilon > 0.0) || !std::isfinite(options.epsilon)) throw InvalidArgument("epsilon must be > 0");
  if (x.is_empty()) throw InvalidArgument("cannot fit on an empty point set");
  if (spec.is_polynomial() && spec.degree() != 1) throw InvalidArgument("base kernel must have degree 1");
  if (options.rank_caps.size() > static_cast<std::size_t>(options.max_degree))
    throw InvalidArgument("more rank caps than degrees");
  for (Index cap : options.rank_caps)
    if (cap < 0) throw InvalidArgument("rank caps must be >= 0");

  Rng rng(options.seed);
  Rng anchor_rng = rng.split("anchors");
  DataMatrix y = [&] {
    if (options.anchors) {
      if (options.anchors->dim() != x.dim()) throw DimensionMismatch("anchors and data differ in dimension");
      if (options.anchors->is_empty()) throw InvalidArgument("anchor override is empty");
      return *options.anchors;
    }
    const Index count = options.anchor_count.value_or(x.size());
    if (count < 1) throw InvalidArgument("anchor count must be >= 1, got " + std::to_string(count));
    return sample_anchors(x, count, anchor_rng);
  }();

  const double theta = spec.theta();
  const Matrix base = kernel_matrix(spec, x, y);
  const Matrix base_y = kernel_matrix(spec, y, y);
  Matrix kd = Matrix::Ones(base.rows(), base.cols());
  Matrix kyd = Matrix::Ones(base_y.rows(), base_y.cols());

  AvicaModel model{spec, std::move(y), options.epsilon, options.rank_caps, {}, {}};
  double epsilon = options.epsilon;
  for (int d = 1; d <= options.max_degree; ++d) {
    epsilon *= theta;
    kd = hadamard_step(kd, base);
    kyd = hadamard_step(kyd, base_y);

    std::optional<Index> cap;
    if (static_cast<std::size_t>(d) <= options.rank_caps.size()) cap = options.rank_caps[static_cast<std::size_t>(d - 1)];
    const ThresholdedSvd t = thresholded_svd(kd, epsilon, cap);

    DegreeLayer layer;
    layer.degree = d;
    layer.epsilon = epsilon;
    layer.v = t.v;
    layer.s = t.s;
    const auto gen = generative_directions(t, kd, kyd, layer.dropped);
    layer.v_perp.resize(static_cast<Index>(gen.size()), base.cols());
    layer.s_perp.resize(static_cast<Index>(gen.size()));
    for (std::size_t i = 0; i < gen.size(); ++i) {
      layer.v_perp.row(static_cast<Index>(i)) = gen[i].w.transpose();
      layer.s_perp(static_cast<Index>(i)) = gen[i].sigma;
    }

    kd = low_rank_project(t);
    kyd = (kyd * t.v.transpose()) * t.v;
    model.layers.push_back(std::move(layer));
  }
  model.features = informativity_order(model.layers, theta);
  return model;
}

std::vector<LayerEvaluation> avica_eval(const AvicaModel& model, const DataMatrix& x) {
  if (x.dim() != model.anchors.dim())
    throw DimensionMismatch("model expects dimension " + std::to_string(model.anchors.dim()) + ", input has " +
                            std::to_string(x.dim()));
  const Matrix base = kernel_matrix(model.spec, x, model.anchors);
  Matrix kd = Matrix::Ones(base.rows(), base.cols());
  std::vector<LayerEvaluation> out;
  out.reserve(model.layers.size());
  for (const auto& layer : model.layers) {
    kd = hadamard_step(kd, base);
    Matrix disc = kd * layer.v.transpose();
    Matrix gen = kd * layer.v_perp.transpose();
    kd = disc * layer.v;
    out.push_back({layer.degree, std::move(disc), std::move(gen)});
  }
  return out;
}

std::vector<DegreeProfile> feature_count_profile(const AvicaModel& model) {
  std::vector<DegreeProfile> out;
  for (const auto& layer : model.layers) out.push_back({layer.degree, layer.v.rows(), layer.v_perp.rows()});
  return out;
}

}  // namespace dualk
