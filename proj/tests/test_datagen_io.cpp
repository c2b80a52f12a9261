#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "dualk/dualk.hpp"
#include "oracle_support.hpp"

using namespace dualk;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("dualk_test_" + name);
}

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  EXPECT_NE(at, std::string::npos) << from;
  if (at != std::string::npos) text.replace(at, from.size(), to);
  return text;
}

const AvicaModel& noiseless_circle_model() {
  static const AvicaModel model = [] {
    const auto x = oracle::circle_points(60, 10.0, 1);
    const auto spec = KernelSpec::inhomogeneous(1);
    AvicaOptions o;
    o.max_degree = 2;
    o.epsilon = 1e-6 * Eigen::BDCSVD<Matrix>(kernel_matrix(spec, x, x)).singularValues()(0);
    o.seed = 2;
    return avica_fit(x, spec, o);
  }();
  return model;
}

double radial_std(const DataMatrix& p, double radius) {
  std::vector<double> r;
  for (Index i = 0; i < p.size(); ++i) r.push_back(p.values().row(i).norm() - radius);
  const double mean = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(r.size());
  double ss = 0.0;
  for (double v : r) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(r.size() - 1));
}

// The zero level passes through the grid cell holding p: a sign change among
// its corners, or a corner inside the band.
bool cell_crosses_zero(const LevelSetGrid& g, double px, double py) {
  const double hx = (g.x.max - g.x.min) / static_cast<double>(g.x.steps - 1);
  const double hy = (g.y.max - g.y.min) / static_cast<double>(g.y.steps - 1);
  const Index ix = std::clamp<Index>(static_cast<Index>(std::floor((px - g.x.min) / hx)), 0, g.x.steps - 2);
  const Index iy = std::clamp<Index>(static_cast<Index>(std::floor((py - g.y.min) / hy)), 0, g.y.steps - 2);
  double lo = INFINITY, hi = -INFINITY;
  for (Index a : {iy, iy + 1})
    for (Index b : {ix, ix + 1}) {
      const double v = g.values(a, b);
      if (std::abs(v) <= g.band()) return true;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  return lo < 0.0 && hi > 0.0;
}

}  // namespace

TEST(Generate, NoiselessCircleOnRadius) {
  const auto p = generate({Circle{10.0}, 200, 0.0, 3}).points;
  ASSERT_EQ(p.size(), 200);
  ASSERT_EQ(p.dim(), 2);
  for (Index i = 0; i < p.size(); ++i) EXPECT_NEAR(p.values().row(i).norm(), 10.0, 1e-12);
}

TEST(Generate, NoisyCircleRadialSpread) {
  int inside = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const double sd = radial_std(generate({Circle{10.0}, 200, 1.1, seed}).points, 10.0);
    inside += sd >= 0.7 && sd <= 1.5;
  }
  EXPECT_GE(inside, 99);
}

TEST(Generate, UnionOfCirclesLabels) {
  const auto data = generate({UnionOfCircles{{5.0, 10.0}}, 40, 0.0, 4});
  ASSERT_EQ(data.points.size(), 80);
  ASSERT_EQ(data.labels.size(), 80u);
  EXPECT_EQ(std::count(data.labels.begin(), data.labels.end(), 0), 40);
  EXPECT_EQ(std::count(data.labels.begin(), data.labels.end(), 1), 40);
  for (Index i = 0; i < 80; ++i)
    EXPECT_NEAR(data.points.values().row(i).norm(), data.labels[static_cast<std::size_t>(i)] == 0 ? 5.0 : 10.0, 1e-12);
}

TEST(Generate, LineAndBlobs) {
  const auto line = generate({Line{{3.0, 4.0}, {1.0, 1.0}, 2.0}, 50, 0.0, 5}).points;
  for (Index i = 0; i < line.size(); ++i) {
    const double dx = line.values()(i, 0) - 1.0, dy = line.values()(i, 1) - 1.0;
    EXPECT_NEAR(4.0 * dx - 3.0 * dy, 0.0, 1e-12);
    EXPECT_LE(std::hypot(dx, dy), 2.0 * 5.0 + 1e-12);
  }
  const auto blobs = generate({Blobs{{{0.0, 0.0, 0.0}, {9.0, 9.0, 9.0}}, {{0.0}, {0.0}}}, 5, 0.0, 6});
  EXPECT_EQ(blobs.points.dim(), 3);
  for (Index i = 0; i < 10; ++i)
    EXPECT_EQ(blobs.points.values()(i, 0), blobs.labels[static_cast<std::size_t>(i)] == 0 ? 0.0 : 9.0);
}

TEST(Generate, PureInSeed) {
  const SyntheticSpec spec{Circle{2.0}, 30, 0.4, 7};
  EXPECT_TRUE(generate(spec).points == generate(spec).points);
  SyntheticSpec other = spec;
  other.seed = 8;
  EXPECT_FALSE(generate(spec).points == generate(other).points);
}

TEST(Generate, Errors) {
  EXPECT_THROW(generate({Circle{0.0}, 10, 0.0, 0}), InvalidArgument);
  EXPECT_THROW(generate({Circle{1.0}, 0, 0.0, 0}), InvalidArgument);
  EXPECT_THROW(generate({Circle{1.0}, 10, -0.1, 0}), InvalidArgument);
  EXPECT_THROW(generate({Line{{1.0, 0.0}, {0.0}}, 10, 0.0, 0}), DimensionMismatch);
}

TEST(CircleThreshold, Examples) {
  EXPECT_NEAR(circle_threshold(0.5, 1.0), 1.41421356, 1e-8);
  EXPECT_EQ(circle_threshold(0.5, 0.0), 0.0);
  EXPECT_NEAR(circle_threshold(1.0 / std::sqrt(2.0), 2.0), 8.0, 1e-12);
  EXPECT_THROW(circle_threshold(0.0, 1.0), InvalidArgument);
  EXPECT_THROW(circle_threshold(0.5, -1.0), InvalidArgument);
}

TEST(Csv, ParsesPoints) {
  const auto p = parse_csv_points("1.0,2.0\n3.0,4.0");
  ASSERT_EQ(p.size(), 2);
  ASSERT_EQ(p.dim(), 2);
  EXPECT_EQ(p.values()(1, 0), 3.0);
  EXPECT_EQ(p.values()(1, 1), 4.0);
}

TEST(Csv, ParsesLabels) {
  const auto d = parse_csv_labeled("1.0,2.0,0\n3.0,4.0,1");
  EXPECT_EQ(d.points.size(), 2);
  EXPECT_EQ(d.points.dim(), 2);
  EXPECT_EQ(d.labels, (std::vector<int>{0, 1}));
}

TEST(Csv, RaggedRowReportsRow) {
  try {
    parse_csv_points("1.0\n1.0,2.0");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
}

TEST(Csv, NonNumericCellReportsRow) {
  try {
    parse_csv_points("# header\n1.0,2.0\n\n3.0,abc\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 4u);
  }
  EXPECT_THROW(parse_csv_labeled("1.0,2.0,0.5\n"), ParseError);
  EXPECT_THROW(parse_csv_points(""), ParseError);
}

TEST(Csv, CommentsAndBlankLinesSkipped) {
  const auto p = parse_csv_points("# x,y\n\n1,2\n# note\n3,4\n");
  EXPECT_EQ(p.size(), 2);
}

TEST(Csv, FileRoundTripIsExact) {
  const auto data = generate({UnionOfCircles{{1.0, 3.0}}, 20, 0.7, 9});
  const auto path = temp_file("roundtrip.csv");
  write_csv_points(path, data.points, &data.labels);
  const auto back = read_csv_labeled(path);
  EXPECT_TRUE(back.points == data.points);
  EXPECT_EQ(back.labels, data.labels);
  std::filesystem::remove(path);
}

TEST(Csv, FormatDoubleRoundTrips) {
  for (double v : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 5e-324}) EXPECT_EQ(parse_csv_points(format_double(v)).values()(0, 0), v);
}

TEST(Persistence, AvicaRoundTripIsBitwise) {
  const auto x = oracle::circle_points(30, 10.0, 10, 0.5);
  AvicaOptions o;
  o.max_degree = 3;
  o.epsilon = 5.0;
  o.seed = 11;
  o.rank_caps = {3, 5};
  const auto model = avica_fit(x, KernelSpec::inhomogeneous(1), o);
  const auto path = temp_file("avica.json");
  save_model(path, model);
  const auto back = load_avica_model(path);
  std::filesystem::remove(path);
  Rng rng(12);
  const auto probe = oracle::random_points(40, 2, rng, -15.0, 15.0);
  const auto a = avica_eval(model, probe);
  const auto b = avica_eval(back, probe);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t d = 0; d < a.size(); ++d) {
    EXPECT_EQ(a[d].discriminative, b[d].discriminative);
    EXPECT_EQ(a[d].generative, b[d].generative);
  }
  EXPECT_EQ(back.rank_caps, model.rank_caps);
  EXPECT_EQ(back.features.size(), model.features.size());
}

TEST(Persistence, IpcaRoundTripIsBitwise) {
  const auto x = oracle::circle_points(20, 3.0, 13, 0.1);
  IpcaOptions o;
  o.anchor_count = 15;
  o.seed = 14;
  const auto model = ipca_fit(x, KernelSpec::gaussian(1.5), o);
  const auto back = std::get<IpcaModel>(deserialize_model(serialize_model(model)));
  EXPECT_EQ(ipca_eval(model, x), ipca_eval(back, x));
  EXPECT_EQ(back.spec.family(), KernelFamily::Gaussian);
}

TEST(Persistence, TruncatedFileIsCorrupt) {
  const std::string text = serialize_model(noiseless_circle_model());
  EXPECT_THROW(deserialize_model(text.substr(0, text.size() / 2)), CorruptFileError);
  EXPECT_THROW(deserialize_model(""), CorruptFileError);
  EXPECT_THROW(deserialize_model("{\"hello\": 1}"), CorruptFileError);
}

TEST(Persistence, FutureVersionIsRejected) {
  const std::string text = serialize_model(noiseless_circle_model());
  const std::string future = replace_once(text, "\"version\": 1", "\"version\": 2");
  EXPECT_THROW(deserialize_model(future), VersionError);
}

TEST(Persistence, SchemaViolations) {
  const std::string text = serialize_model(noiseless_circle_model());
  EXPECT_THROW(deserialize_model(replace_once(text, "\"kind\": \"avica\"", "\"kind\": \"svm\"")), SchemaError);

  AvicaModel bad = noiseless_circle_model();
  bad.layers[0].s.reverseInPlace();
  EXPECT_THROW(deserialize_model(serialize_model(bad)), SchemaError);

  bad = noiseless_circle_model();
  bad.layers[1].epsilon *= 2.0;
  EXPECT_THROW(deserialize_model(serialize_model(bad)), SchemaError);

  bad = noiseless_circle_model();
  bad.layers[0].v(0, 0) += 0.5;
  EXPECT_THROW(deserialize_model(serialize_model(bad)), SchemaError);

  bad = noiseless_circle_model();
  std::swap(bad.features.front(), bad.features.back());
  EXPECT_THROW(deserialize_model(serialize_model(bad)), SchemaError);
}

TEST(Persistence, MissingFile) {
  EXPECT_THROW(load_model(temp_file("does_not_exist.json")), PersistenceError);
}

TEST(LevelSet, NoiselessCircleBandFollowsCircle) {
  const auto& model = noiseless_circle_model();
  const auto grid = level_set_grid(model, {-15.0, 15.0, 121}, {-15.0, 15.0, 121});
  EXPECT_EQ(grid.feature.label, FeatureLabel::Generative);
  EXPECT_EQ(grid.feature.degree, 2);
  const auto probe = oracle::circle_points(200, 10.0, 15);
  int hits = 0;
  for (Index i = 0; i < probe.size(); ++i) hits += cell_crosses_zero(grid, probe.values()(i, 0), probe.values()(i, 1));
  EXPECT_GE(hits, 198);
}

TEST(LevelSet, NoiselessFeatureVanishesOnCircle) {
  const auto& model = noiseless_circle_model();
  const auto& f = smallest_generative_feature(model);
  const Vector on = evaluate_feature(model, f, oracle::circle_points(100, 10.0, 16));
  const Vector off = evaluate_feature(model, f, DataMatrix{{0.0, 0.0}, {20.0, 0.0}});
  EXPECT_LE(on.cwiseAbs().maxCoeff(), 1e-6 * off.cwiseAbs().minCoeff());
}

TEST(LevelSet, FarPointsLeaveTheBand) {
  const auto grid = level_set_grid(noiseless_circle_model(), {30.0, 60.0, 50}, {-60.0, -30.0, 50});
  const Index outside = (grid.values.array().abs() > grid.band()).count();
  EXPECT_GE(static_cast<double>(outside), 0.99 * static_cast<double>(grid.values.size()));
}

TEST(LevelSet, TwoStepsAndCsvHeader) {
  const auto grid = level_set_grid(noiseless_circle_model(), {-1.0, 1.0, 2}, {-2.0, 2.0, 2});
  EXPECT_EQ(grid.values.rows(), 2);
  EXPECT_EQ(grid.values.cols(), 2);
  EXPECT_EQ(grid.band(), grid.feature.singular_value / 10.0);
  std::ostringstream out;
  write_level_set_csv(out, grid);
  const std::string csv = out.str();
  EXPECT_NE(csv.find("# band,"), std::string::npos);
  EXPECT_NE(csv.find("# s,"), std::string::npos);
  EXPECT_NE(csv.find("x,y,value\n"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7 + 4);
}

TEST(LevelSet, Errors) {
  const auto& model = noiseless_circle_model();
  EXPECT_THROW(level_set_grid(model, {-1.0, 1.0, 1}, {-1.0, 1.0, 5}), InvalidArgument);
  EXPECT_THROW(level_set_grid(model, {1.0, -1.0, 5}, {-1.0, 1.0, 5}), InvalidArgument);
  AvicaModel empty = model;
  for (auto& layer : empty.layers) {
    layer.v_perp.resize(0, layer.v_perp.cols());
    layer.s_perp.resize(0);
  }
  empty.features = informativity_order(empty.layers, empty.spec.theta());
  EXPECT_THROW(level_set_grid(empty, {-1.0, 1.0, 5}, {-1.0, 1.0, 5}), NoGenerativeFeatures);
  AvicaOptions o;
  o.epsilon = 1.0;
  Rng rng(17);
  const auto three_d = avica_fit(oracle::random_points(10, 3, rng), KernelSpec::inhomogeneous(1), o);
  EXPECT_THROW(level_set_grid(three_d, {-1.0, 1.0, 5}, {-1.0, 1.0, 5}), DimensionMismatch);
}
