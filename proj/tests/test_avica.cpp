#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "dualk/dualk.hpp"
#include "oracle_support.hpp"

using namespace dualk;

namespace {

AvicaOptions options(int max_degree, double eps, std::uint64_t seed = 0) {
  AvicaOptions o;
  o.max_degree = max_degree;
  o.epsilon = eps;
  o.seed = seed;
  return o;
}

double top_singular(const Matrix& k) { return Eigen::BDCSVD<Matrix>(k).singularValues()(0); }

double relative_eps(const DataMatrix& x, const KernelSpec& spec) {
  return 1e-6 * top_singular(kernel_matrix(spec, x, x));
}

double gap_to_circle(const AvicaModel& model, double radius) {
  const auto gen = oracle::generative_polys(model, 2);
  if (gen.empty()) return std::acos(0.0);
  const std::vector<poly::PolyVector> truth{oracle::circle_poly(radius)};
  const double scale = oracle::expansion_scale(oracle::column_polys(model, 2));
  return std::max(poly::containment_angle(gen, truth, scale), poly::containment_angle(truth, gen));
}

}  // namespace

TEST(AvicaFit, DegreeOneMatchesIpca) {
  Rng rng(1);
  const auto x = oracle::random_points(25, 3, rng);
  const auto y = oracle::random_points(12, 3, rng, -2.0, 2.0);
  const auto spec = KernelSpec::inhomogeneous(1);
  const double eps = 0.05;
  auto ao = options(1, eps);
  ao.anchors = y;
  const auto avica = avica_fit(x, spec, ao);
  IpcaOptions io;
  io.anchors = y;
  io.epsilon = eps * spec.theta();
  const auto ipca = ipca_fit(x, spec, io);

  const auto& layer = avica.layers.front();
  std::vector<const Feature*> disc;
  for (const auto& f : ipca.features)
    if (f.label == FeatureLabel::Discriminative) disc.push_back(&f);
  ASSERT_EQ(static_cast<Index>(disc.size()), layer.v.rows());
  for (Index i = 0; i < layer.v.rows(); ++i) {
    EXPECT_NEAR(layer.s(i), disc[static_cast<std::size_t>(i)]->singular_value, 1e-10 * layer.s(0));
    EXPECT_NEAR(std::abs(layer.v.row(i).dot(disc[static_cast<std::size_t>(i)]->alphas.transpose())), 1.0, 1e-10);
  }
  const Matrix a = avica_eval(avica, x).front().discriminative;
  const Matrix b = ipca_eval(ipca, x).leftCols(a.cols());
  EXPECT_LE((a.cwiseAbs() - b.cwiseAbs()).cwiseAbs().maxCoeff(), 1e-10 * layer.s(0));
}

TEST(AvicaFit, NoiselessCircleFindsCircleAtDegreeTwo) {
  const auto x = oracle::circle_points(30, 10.0, 2);
  const auto spec = KernelSpec::inhomogeneous(1);
  const auto model = avica_fit(x, spec, options(2, relative_eps(x, spec), 3));
  ASSERT_GE(model.layers[1].v_perp.rows(), 1);
  EXPECT_LE(gap_to_circle(model, 10.0), 1e-4);
}

TEST(AvicaFit, RepeatedPointHasRankOne) {
  const DataMatrix x{{0.4, -1.3}, {0.4, -1.3}, {0.4, -1.3}, {0.4, -1.3}};
  const auto model = avica_fit(x, KernelSpec::inhomogeneous(1), options(2, 1e-6, 4));
  for (const auto& layer : model.layers) EXPECT_EQ(layer.v.rows(), 1);
  for (const auto& p : feature_count_profile(model)) EXPECT_EQ(p.discriminative, 1);
}

TEST(AvicaFit, LayerInvariants) {
  const auto x = oracle::circle_points(20, 2.0, 5, 0.05);
  const auto spec = KernelSpec::inhomogeneous(1, 0.6);
  auto o = options(3, 0.5, 6);
  o.anchor_count = 15;
  const auto model = avica_fit(x, spec, o);
  double eps = 0.5;
  for (const auto& layer : model.layers) {
    eps *= 0.6;
    EXPECT_DOUBLE_EQ(layer.epsilon, eps);
    EXPECT_EQ(layer.v.rows() + layer.v_perp.rows() + layer.dropped, 15);
    Matrix all(layer.v.rows() + layer.v_perp.rows(), 15);
    all << layer.v, layer.v_perp;
    EXPECT_LE((all * all.transpose() - Matrix::Identity(all.rows(), all.rows())).cwiseAbs().maxCoeff(), 1e-10);
    for (Index i = 0; i < layer.s.size(); ++i) EXPECT_GE(layer.s(i), layer.epsilon);
    for (Index i = 0; i < layer.s_perp.size(); ++i) {
      EXPECT_LT(layer.s_perp(i), layer.epsilon);
      EXPECT_GT(layer.s_perp(i), 0.0);
    }
  }
  EXPECT_NO_THROW(validate_model(model));
}

TEST(AvicaFit, InformativityOrder) {
  const auto x = oracle::circle_points(25, 3.0, 7, 0.1);
  const auto model = avica_fit(x, KernelSpec::inhomogeneous(1), options(3, 1.0, 8));
  const double theta = model.spec.theta();
  bool seen_disc = false;
  const Feature* prev = nullptr;
  for (const auto& f : model.features) {
    EXPECT_NEAR(f.quantum, f.singular_value * std::pow(theta, f.degree), 1e-15 * f.singular_value + 1e-300);
    if (f.label == FeatureLabel::Discriminative) {
      if (seen_disc) EXPECT_LE(f.quantum, prev->quantum);
      seen_disc = true;
    } else {
      EXPECT_FALSE(seen_disc);
      if (prev) EXPECT_GE(f.quantum, prev->quantum);
    }
    prev = &f;
  }
}

TEST(AvicaFit, OrderBreaksTiesByDegreeThenIndex) {
  DegreeLayer a;
  a.degree = 1;
  a.v = Matrix::Zero(0, 2);
  a.s = Vector(0);
  a.v_perp = Matrix::Identity(2, 2);
  a.s_perp = Vector::Constant(2, 1.0);
  DegreeLayer b = a;
  b.degree = 2;
  b.s_perp = Vector::Constant(2, 2.0);
  const std::vector<DegreeLayer> layers{a, b};
  const auto order = informativity_order(layers, 0.5);
  ASSERT_EQ(order.size(), 4u);
  EXPECT_EQ(order[0].degree, 1);
  EXPECT_EQ(order[0].index, 0);
  EXPECT_EQ(order[1].degree, 1);
  EXPECT_EQ(order[1].index, 1);
  EXPECT_EQ(order[2].degree, 2);
  EXPECT_EQ(order[2].index, 0);
}

TEST(AvicaFit, RankCapLimitsRetainedRank) {
  const auto x = oracle::circle_points(30, 10.0, 9, 1.0);
  auto o = options(2, 1e-9, 10);
  o.rank_caps = {3, 5};
  const auto model = avica_fit(x, KernelSpec::inhomogeneous(1), o);
  EXPECT_EQ(model.layers[0].v.rows(), 3);
  EXPECT_EQ(model.layers[1].v.rows(), 5);
  EXPECT_GE(model.layers[1].v_perp.rows(), 1);
}

TEST(AvicaFit, SeedDeterminism) {
  const auto x = oracle::circle_points(20, 1.0, 11, 0.01);
  const auto a = avica_fit(x, KernelSpec::inhomogeneous(1), options(3, 1e-3, 12));
  const auto b = avica_fit(x, KernelSpec::inhomogeneous(1), options(3, 1e-3, 12));
  ASSERT_EQ(a.layers.size(), b.layers.size());
  for (std::size_t d = 0; d < a.layers.size(); ++d) {
    EXPECT_EQ(a.layers[d].v, b.layers[d].v);
    EXPECT_EQ(a.layers[d].v_perp, b.layers[d].v_perp);
  }
  const auto ea = avica_eval(a, x);
  const auto eb = avica_eval(b, x);
  for (std::size_t d = 0; d < ea.size(); ++d) EXPECT_EQ(ea[d].generative, eb[d].generative);
}

TEST(AvicaFit, Errors) {
  const auto x = oracle::circle_points(8, 1.0, 13);
  const auto spec = KernelSpec::inhomogeneous(1);
  EXPECT_THROW(avica_fit(x, spec, options(0, 1e-3)), InvalidArgument);
  EXPECT_THROW(avica_fit(x, spec, options(2, 0.0)), InvalidArgument);
  EXPECT_THROW(avica_fit(x, spec, options(2, -1.0)), InvalidArgument);
  auto o = options(2, 1e-3);
  o.anchor_count = 0;
  EXPECT_THROW(avica_fit(x, spec, o), InvalidArgument);
  EXPECT_THROW(avica_fit(x, KernelSpec::inhomogeneous(2), options(2, 1e-3)), InvalidArgument);
  auto bad = options(2, 1e-3);
  bad.anchors = DataMatrix{{1.0, 2.0, 3.0}};
  EXPECT_THROW(avica_fit(x, spec, bad), DimensionMismatch);
}

TEST(AvicaFit, GaussianBase) {
  const auto x = oracle::circle_points(20, 1.0, 14, 0.02);
  const auto model = avica_fit(x, KernelSpec::gaussian(0.8), options(2, 1e-4, 15));
  EXPECT_EQ(model.max_degree(), 2);
  for (const auto& layer : avica_eval(model, x)) {
    EXPECT_TRUE(layer.discriminative.allFinite());
    EXPECT_TRUE(layer.generative.allFinite());
  }
}

TEST(AvicaEval, TrainingDataReproducesLeftFactor) {
  const auto x = oracle::circle_points(30, 2.0, 16, 0.1);
  const auto model = avica_fit(x, KernelSpec::inhomogeneous(1), options(3, 1e-2, 17));
  const auto evals = avica_eval(model, x);
  for (std::size_t d = 0; d < evals.size(); ++d) {
    const auto& layer = model.layers[d];
    const Matrix& us = evals[d].discriminative;
    // Columns of U diag(S) are mutually orthogonal with norms S.
    const Matrix gram = us.transpose() * us;
    const Matrix expected = layer.s.cwiseAbs2().asDiagonal();
    EXPECT_LE((gram - expected).cwiseAbs().maxCoeff(), 1e-8 * layer.s(0) * layer.s(0));
    for (Index i = 0; i < layer.s_perp.size(); ++i)
      EXPECT_NEAR(evals[d].generative.col(i).norm(), layer.s_perp(i), 1e-8 * layer.s(0));
  }
}

TEST(AvicaEval, TrainingDataMatchesKernelFactorisation) {
  const auto x = oracle::circle_points(15, 1.5, 18, 0.05);
  const auto model = avica_fit(x, KernelSpec::inhomogeneous(1), options(2, 1e-3, 19));
  const Matrix k = kernel_matrix(model.spec, x, model.anchors);
  Matrix kd = Matrix::Ones(k.rows(), k.cols());
  const auto evals = avica_eval(model, x);
  for (std::size_t d = 0; d < model.layers.size(); ++d) {
    kd = kd.cwiseProduct(k);
    const auto t = thresholded_svd(kd, model.layers[d].epsilon);
    const Matrix us = t.u * t.s.asDiagonal();
    EXPECT_LE((evals[d].discriminative - us).cwiseAbs().maxCoeff(), 1e-8 * t.largest());
    kd = us * t.v;
  }
}

TEST(AvicaEval, GenerativeVanishOnFreshCirclePoints) {
  const auto x = oracle::circle_points(30, 10.0, 20);
  const auto spec = KernelSpec::inhomogeneous(1);
  const auto model = avica_fit(x, spec, options(2, relative_eps(x, spec), 21));
  const auto fresh = oracle::circle_points(100, 10.0, 22);
  const auto evals = avica_eval(model, fresh);
  const double knorm = kernel_matrix(spec, fresh, model.anchors).norm();
  ASSERT_GE(evals[1].generative.cols(), 1);
  EXPECT_LE(evals[1].generative.cwiseAbs().maxCoeff(), 1e-6 * knorm);
}

TEST(AvicaEval, EmptyInput) {
  const auto x = oracle::circle_points(10, 1.0, 23);
  const auto model = avica_fit(x, KernelSpec::inhomogeneous(1), options(3, 1e-3, 24));
  const auto evals = avica_eval(model, DataMatrix::empty(2));
  ASSERT_EQ(evals.size(), 3u);
  for (std::size_t d = 0; d < evals.size(); ++d) {
    EXPECT_EQ(evals[d].degree, static_cast<int>(d) + 1);
    EXPECT_EQ(evals[d].discriminative.rows(), 0);
    EXPECT_EQ(evals[d].discriminative.cols(), model.layers[d].v.rows());
    EXPECT_EQ(evals[d].generative.rows(), 0);
  }
}

TEST(AvicaEval, DimensionMismatchThrows) {
  const auto x = oracle::circle_points(10, 1.0, 25);
  const auto model = avica_fit(x, KernelSpec::inhomogeneous(1), options(1, 1e-3));
  EXPECT_THROW(avica_eval(model, DataMatrix{{1.0}}), DimensionMismatch);
}

TEST(AvicaProfile, LinearCircle) {
  const auto x = oracle::circle_points(20, 10.0, 26);
  const auto spec = KernelSpec::inhomogeneous(1);
  const auto profile = feature_count_profile(avica_fit(x, spec, options(1, relative_eps(x, spec), 27)));
  ASSERT_EQ(profile.size(), 1u);
  EXPECT_EQ(profile[0].degree, 1);
  EXPECT_EQ(profile[0].discriminative, 3);
}

TEST(AvicaProfile, RetainedRankFollowsHilbertFunction) {
  const auto x = oracle::circle_points(30, 1.0, 28);
  const auto spec = KernelSpec::inhomogeneous(1);
  const auto model = avica_fit(x, spec, options(4, relative_eps(x, spec), 29));
  const auto profile = feature_count_profile(model);
  ASSERT_EQ(profile.size(), 4u);
  for (const auto& p : profile) {
    EXPECT_EQ(p.discriminative, 2 * p.degree + 1) << "degree " << p.degree;
    EXPECT_EQ(p.discriminative, model.layers[static_cast<std::size_t>(p.degree - 1)].v.rows());
  }
}

TEST(AvicaProfile, NoiselessCircleUpToDegreeThree) {
  const auto x = oracle::circle_points(30, 10.0, 30);
  const auto spec = KernelSpec::inhomogeneous(1);
  const auto profile = feature_count_profile(avica_fit(x, spec, options(3, relative_eps(x, spec), 31)));
  std::vector<Index> disc;
  for (const auto& p : profile) disc.push_back(p.discriminative);
  EXPECT_EQ(disc, (std::vector<Index>{3, 5, 7}));
}

TEST(AvicaProperty, GenerativeTimesLinearStaysVanishing) {
  const auto x = oracle::circle_points(30, 1.0, 32);
  const auto spec = KernelSpec::inhomogeneous(1);
  const auto model = avica_fit(x, spec, options(2, relative_eps(x, spec), 33));
  const auto gen = oracle::generative_polys(model, 2);
  ASSERT_FALSE(gen.empty());
  const auto slice = poly::vanishing_slice(x, 3);
  const double scale = oracle::expansion_scale(oracle::column_polys(model, 2));
  Rng rng(34);
  for (const auto& g : gen) {
    for (int trial = 0; trial < 5; ++trial) {
      const std::vector<double> y{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
      const auto linear = poly::kernel_as_poly(spec, y);
      const std::vector<poly::PolyVector> product{g * linear};
      EXPECT_LE(poly::containment_angle(product, slice, scale * linear.coefficient_norm()), 1e-4);
    }
  }
}

TEST(AvicaProperty, NoiseConsistencyOnCircle) {
  std::vector<double> gaps;
  for (double noise : {1e-1, 1e-2, 1e-3, 0.0}) {
    const auto x = oracle::circle_points(40, 10.0, 35, noise);
    auto o = options(2, 1e-9, 36);
    o.rank_caps = {3, 5};
    gaps.push_back(gap_to_circle(avica_fit(x, KernelSpec::inhomogeneous(1), o), 10.0));
  }
  for (std::size_t i = 1; i < gaps.size(); ++i) EXPECT_LT(gaps[i], gaps[i - 1]);
  EXPECT_LE(gaps.back(), 1e-4);
}
