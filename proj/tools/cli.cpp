#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dualk/dualk.hpp"

namespace dualk::cli {
namespace {

// Flag combinations or values rejected before any work starts.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      require(used == cell.size(), flag + ": cannot parse '" + cell + "'");
    } catch (const std::logic_error&) {
      throw UsageError(flag + ": cannot parse '" + cell + "'");
    }
  }
  require(!out.empty(), flag + ": empty list");
  return out;
}

std::vector<std::vector<double>> parse_groups(const std::string& text, const std::string& flag) {
  std::vector<std::vector<double>> out;
  std::stringstream ss(text);
  std::string group;
  while (std::getline(ss, group, ';')) out.push_back(parse_list(group, flag));
  require(!out.empty(), flag + ": empty list");
  return out;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  return out;
}

struct KernelFlags {
  std::string family = "inhom";
  double theta = kDefaultTheta;
  std::optional<double> width;

  void add(CLI::App* app) {
    app->add_option("--kernel", family, "Kernel family")->check(CLI::IsMember({"hom", "inhom", "gauss"}));
    app->add_option("--theta", theta, "Kernel scale in (0, 1)");
    app->add_option("--width", width, "Gaussian width");
  }

  void validate() const {
    require(theta > 0.0 && theta < 1.0, "--theta must lie in (0, 1)");
    if (family == "gauss") require(width && *width > 0.0, "--width must be given and > 0 for the gauss kernel");
  }

  KernelSpec spec(int degree) const {
    switch (parse_family(family)) {
      case KernelFamily::HomogeneousPoly: return KernelSpec::homogeneous(degree, theta);
      case KernelFamily::InhomogeneousPoly: return KernelSpec::inhomogeneous(degree, theta);
      case KernelFamily::Gaussian: return KernelSpec::gaussian(*width, theta);
    }
    throw UsageError("--kernel: unknown family");
  }
};

// synth -------------------------------------------------------------------

struct SynthFlags {
  std::string shape = "circle";
  double radius = 10.0;
  std::string radii = "5,10";
  std::string direction = "1,0";
  std::string offset;
  double extent = 10.0;
  std::string centers = "-5,0;5,0";
  std::string spreads = "1;1";
  Index n = 200;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string out;
};

void add_synth(CLI::App& app, SynthFlags& f) {
  auto* c = app.add_subcommand("synth", "Generate a synthetic point set as CSV");
  c->add_option("--shape", f.shape)->check(CLI::IsMember({"circle", "circles", "line", "blobs"}));
  c->add_option("--radius", f.radius, "Circle radius");
  c->add_option("--radii", f.radii, "Comma-separated radii for --shape circles");
  c->add_option("--direction", f.direction, "Line direction, comma-separated");
  c->add_option("--offset", f.offset, "Line offset, comma-separated");
  c->add_option("--extent", f.extent, "Line parameter range [-extent, extent]");
  c->add_option("--centers", f.centers, "Blob centers, e.g. -5,0;5,0");
  c->add_option("--spreads", f.spreads, "Blob standard deviations, one group per center");
  c->add_option("--n", f.n, "Points (per component for circles and blobs)");
  c->add_option("--noise", f.noise, "Gaussian noise std per coordinate");
  c->add_option("--seed", f.seed);
  c->add_option("--out", f.out)->required();
}

int run_synth(const SynthFlags& f, std::ostream&) {
  require(f.n >= 1, "--n must be >= 1");
  require(f.noise >= 0.0 && std::isfinite(f.noise), "--noise must be >= 0");
  SyntheticSpec spec;
  spec.count = f.n;
  spec.noise_sigma = f.noise;
  spec.seed = f.seed;
  if (f.shape == "circle") {
    require(f.radius > 0.0, "--radius must be > 0");
    spec.shape = Circle{f.radius};
  } else if (f.shape == "circles") {
    const auto radii = parse_list(f.radii, "--radii");
    for (double r : radii) require(r > 0.0, "--radii must all be > 0");
    spec.shape = UnionOfCircles{radii};
  } else if (f.shape == "line") {
    require(f.extent > 0.0, "--extent must be > 0");
    spec.shape = Line{parse_list(f.direction, "--direction"),
                      f.offset.empty() ? std::vector<double>{} : parse_list(f.offset, "--offset"), f.extent};
  } else {
    spec.shape = Blobs{parse_groups(f.centers, "--centers"), parse_groups(f.spreads, "--spreads")};
  }
  const auto data = generate(spec);
  auto out = open_output(f.out);
  write_csv_points(out, data.points, data.labels.empty() ? nullptr : &data.labels);
  return 0;
}

// fit ---------------------------------------------------------------------

struct FitFlags {
  std::string algo;
  KernelFlags kernel;
  int degree = 1;
  int maxdeg = 1;
  std::optional<Index> anchors;
  std::optional<double> epsilon;
  std::string epsilon_rule = "fixed";
  std::optional<double> noise;
  std::string rank_cap;
  std::uint64_t seed = 0;
  std::string in;
  std::string model;
};

void add_fit(CLI::App& app, FitFlags& f) {
  auto* c = app.add_subcommand("fit", "Fit an IPCA or AVICA model");
  c->add_option("--algo", f.algo)->required()->check(CLI::IsMember({"ipca", "avica"}));
  f.kernel.add(c);
  c->add_option("--degree", f.degree, "Kernel degree (ipca)");
  c->add_option("--maxdeg", f.maxdeg, "Maximum degree (avica)");
  c->add_option("--anchors", f.anchors, "Number of anchor points (default: number of points)");
  c->add_option("--epsilon", f.epsilon, "Singular value threshold");
  c->add_option("--epsilon-rule", f.epsilon_rule, "fixed (1e-6 of the largest singular value), logmean, or circle")
      ->check(CLI::IsMember({"fixed", "logmean", "circle"}));
  c->add_option("--noise", f.noise, "Noise std for --epsilon-rule circle");
  c->add_option("--rank-cap", f.rank_cap, "Comma-separated retained-rank caps per degree (avica)");
  c->add_option("--seed", f.seed);
  c->add_option("--in", f.in)->required();
  c->add_option("--model", f.model)->required();
}

double resolve_epsilon(const FitFlags& f, const Matrix& k) {
  if (f.epsilon) return *f.epsilon;
  if (f.epsilon_rule == "logmean") return logarithmic_mean_threshold(Eigen::BDCSVD<Matrix>(k).singularValues());
  if (f.epsilon_rule == "circle") return std::max(circle_threshold(f.kernel.theta, *f.noise), 1e-8);
  return default_epsilon(k);
}

int run_fit(const FitFlags& f, std::ostream& out) {
  f.kernel.validate();
  if (f.epsilon) {
    if (f.algo == "avica") require(*f.epsilon > 0.0 && std::isfinite(*f.epsilon), "--epsilon must be > 0");
    else require(*f.epsilon >= 0.0 && std::isfinite(*f.epsilon), "--epsilon must be >= 0");
  }
  require(f.degree >= 0, "--degree must be >= 0");
  require(f.maxdeg >= 1, "--maxdeg must be >= 1");
  require(!f.anchors || *f.anchors >= 1, "--anchors must be >= 1");
  if (f.epsilon_rule == "circle") require(f.noise && *f.noise >= 0.0, "--noise must be given and >= 0 for --epsilon-rule circle");
  std::vector<Index> caps;
  if (!f.rank_cap.empty()) {
    require(f.algo == "avica", "--rank-cap applies to avica only");
    for (double c : parse_list(f.rank_cap, "--rank-cap")) {
      require(c >= 0.0 && c == std::floor(c), "--rank-cap entries must be non-negative integers");
      caps.push_back(static_cast<Index>(c));
    }
    require(caps.size() <= static_cast<std::size_t>(f.maxdeg), "--rank-cap has more entries than --maxdeg");
  }

  const DataMatrix x = read_csv_points(f.in);
  Rng anchor_rng = Rng(f.seed).split("anchors");
  const DataMatrix y = sample_anchors(x, f.anchors.value_or(x.size()), anchor_rng);

  if (f.algo == "ipca") {
    const KernelSpec spec = f.kernel.family == "gauss" ? f.kernel.spec(1) : f.kernel.spec(f.degree);
    IpcaOptions opt;
    opt.anchors = y;
    opt.seed = f.seed;
    opt.epsilon = resolve_epsilon(f, kernel_matrix(spec, x, y));
    const IpcaModel model = ipca_fit(x, spec, opt);
    save_model(f.model, model);
    const auto disc = std::count_if(model.features.begin(), model.features.end(),
                                    [](const Feature& ft) { return ft.label == FeatureLabel::Discriminative; });
    out << "ipca degree " << spec.degree() << ": " << disc << " discriminative, "
        << model.features.size() - static_cast<std::size_t>(disc) << " generative\n";
    return 0;
  }

  const KernelSpec spec = f.kernel.spec(1);
  AvicaOptions opt;
  opt.max_degree = f.maxdeg;
  opt.anchors = y;
  opt.seed = f.seed;
  opt.rank_caps = caps;
  opt.epsilon = resolve_epsilon(f, kernel_matrix(spec, x, y));
  const AvicaModel model = avica_fit(x, spec, opt);
  save_model(f.model, model);
  for (const auto& p : feature_count_profile(model))
    out << "avica degree " << p.degree << ": " << p.discriminative << " discriminative, " << p.generative << " generative\n";
  return 0;
}

// eval --------------------------------------------------------------------

struct EvalFlags {
  std::string model;
  std::string in;
  std::string out;
};

void add_eval(CLI::App& app, EvalFlags& f) {
  auto* c = app.add_subcommand("eval", "Evaluate model features on points");
  c->add_option("--model", f.model)->required();
  c->add_option("--in", f.in)->required();
  c->add_option("--out", f.out)->required();
}

int run_eval(const EvalFlags& f, std::ostream&) {
  const AnyModel model = load_model(f.model);
  const DataMatrix x = read_csv_points(f.in);
  std::vector<std::string> header;
  std::vector<Matrix> blocks;
  if (const auto* a = std::get_if<AvicaModel>(&model)) {
    for (auto& layer : avica_eval(*a, x)) {
      for (Index i = 0; i < layer.discriminative.cols(); ++i)
        header.push_back("d" + std::to_string(layer.degree) + "_disc_" + std::to_string(i));
      for (Index i = 0; i < layer.generative.cols(); ++i)
        header.push_back("d" + std::to_string(layer.degree) + "_gen_" + std::to_string(i));
      blocks.push_back(std::move(layer.discriminative));
      blocks.push_back(std::move(layer.generative));
    }
  } else if (const auto* p = std::get_if<IpcaModel>(&model)) {
    Index disc = 0, gen = 0;
    for (const auto& ft : p->features)
      header.push_back(ft.label == FeatureLabel::Discriminative ? "disc_" + std::to_string(disc++)
                                                                : "gen_" + std::to_string(gen++));
    blocks.push_back(ipca_eval(*p, x));
  } else {
    throw Error("eval needs an ipca or avica model; use classify for one-vs-all models");
  }

  auto out = open_output(f.out);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (Index r = 0; r < x.size(); ++r) {
    bool first = true;
    for (const auto& b : blocks)
      for (Index c = 0; c < b.cols(); ++c) {
        out << (first ? "" : ",") << format_double(b(r, c));
        first = false;
      }
    out << '\n';
  }
  return 0;
}

// classify ----------------------------------------------------------------

struct ClassifyFlags {
  std::string train;
  std::string test;
  int maxdeg = 1;
  KernelFlags kernel;
  std::optional<double> epsilon;
  std::string epsilon_rule = "logmean";
  Index anchor_cap = 200;
  std::uint64_t seed = 0;
  std::string report;
  std::string model;
};

void add_classify(CLI::App& app, ClassifyFlags& f) {
  auto* c = app.add_subcommand("classify", "Train one-vs-all models and score a test set");
  c->add_option("--train", f.train)->required();
  c->add_option("--test", f.test)->required();
  c->add_option("--maxdeg", f.maxdeg);
  f.kernel.add(c);
  c->add_option("--epsilon", f.epsilon, "Fixed threshold for every class");
  c->add_option("--epsilon-rule", f.epsilon_rule)->check(CLI::IsMember({"logmean", "fixed"}));
  c->add_option("--anchor-cap", f.anchor_cap, "Size of the shared anchor pool");
  c->add_option("--seed", f.seed);
  c->add_option("--report", f.report)->required();
  c->add_option("--model", f.model, "Also save the trained model here");
}

int run_classify(const ClassifyFlags& f, std::ostream& out) {
  f.kernel.validate();
  require(f.maxdeg >= 1, "--maxdeg must be >= 1");
  require(f.anchor_cap >= 1, "--anchor-cap must be >= 1");
  if (f.epsilon) require(*f.epsilon > 0.0 && std::isfinite(*f.epsilon), "--epsilon must be > 0");
  require(f.epsilon_rule != "fixed" || f.epsilon, "--epsilon-rule fixed needs --epsilon");

  const LabeledDataset train = read_csv_labeled(f.train);
  const LabeledDataset test = read_csv_labeled(f.test);
  OneVsAllOptions opt;
  opt.max_degree = f.maxdeg;
  opt.seed = f.seed;
  opt.anchor_cap = f.anchor_cap;
  if (f.epsilon) opt.epsilon_rule = FixedEpsilon{*f.epsilon};
  const OneVsAllModel model = train_one_vs_all(train, f.kernel.spec(1), opt);
  if (!f.model.empty()) save_model(f.model, model);

  const ClassificationReport r = classification_report(model, test);
  auto rep = open_output(f.report);
  rep << "class,support,predicted,correct";
  for (int id : r.classes) rep << ",predicted_as_" << id;
  rep << ",overall_accuracy\n";
  for (std::size_t i = 0; i < r.classes.size(); ++i) {
    const Index k = static_cast<Index>(i);
    rep << r.classes[i] << ',' << r.confusion.row(k).sum() << ',' << r.confusion.col(k).sum() << ',' << r.confusion(k, k);
    for (Index j = 0; j < r.confusion.cols(); ++j) rep << ',' << r.confusion(k, j);
    rep << ',' << format_double(r.accuracy) << '\n';
  }
  out << "accuracy " << format_double(r.accuracy) << '\n';
  return 0;
}

// levelset ----------------------------------------------------------------

struct LevelsetFlags {
  std::string model;
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  Index steps = 101;
  std::string out;
};

void add_levelset(CLI::App& app, LevelsetFlags& f) {
  auto* c = app.add_subcommand("levelset", "Export the smallest generative feature on a grid");
  c->add_option("--model", f.model)->required();
  c->add_option("--xmin", f.xmin)->required();
  c->add_option("--xmax", f.xmax)->required();
  c->add_option("--ymin", f.ymin)->required();
  c->add_option("--ymax", f.ymax)->required();
  c->add_option("--steps", f.steps);
  c->add_option("--out", f.out)->required();
}

int run_levelset(const LevelsetFlags& f, std::ostream& out) {
  require(f.steps >= 2, "--steps must be >= 2");
  require(f.xmax > f.xmin, "--xmax must exceed --xmin");
  require(f.ymax > f.ymin, "--ymax must exceed --ymin");
  const AvicaModel model = load_avica_model(f.model);
  const LevelSetGrid grid = level_set_grid(model, {f.xmin, f.xmax, f.steps}, {f.ymin, f.ymax, f.steps});
  auto file = open_output(f.out);
  write_level_set_csv(file, grid);
  out << "band " << format_double(grid.band()) << '\n';
  return 0;
}

// errors ------------------------------------------------------------------

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const DimensionMismatch*>(&e)) return "dimension";
  if (dynamic_cast<const ParseError*>(&e)) return "parse";
  if (dynamic_cast<const VersionError*>(&e)) return "version";
  if (dynamic_cast<const CorruptFileError*>(&e)) return "corrupt_file";
  if (dynamic_cast<const SchemaError*>(&e)) return "schema";
  if (dynamic_cast<const PersistenceError*>(&e)) return "persistence";
  if (dynamic_cast<const NoGenerativeFeatures*>(&e)) return "no_generative_features";
  if (dynamic_cast<const InvalidArgument*>(&e)) return "invalid_argument";
  return "runtime";
}

void report(std::ostream& err, const std::string& kind, const std::string& message) {
  err << nlohmann::json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kernel-ideal feature learning", "dualk"};
  app.require_subcommand(1);
  SynthFlags synth;
  FitFlags fit;
  EvalFlags eval;
  ClassifyFlags cls;
  LevelsetFlags level;
  add_synth(app, synth);
  add_fit(app, fit);
  add_eval(app, eval);
  add_classify(app, cls);
  add_levelset(app, level);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    report(err, "usage", e.what());
    return 2;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "synth") return run_synth(synth, out);
    if (name == "fit") return run_fit(fit, out);
    if (name == "eval") return run_eval(eval, out);
    if (name == "classify") return run_classify(cls, out);
    return run_levelset(level, out);
  } catch (const UsageError& e) {
    report(err, "usage", e.what());
    return 2;
  } catch (const std::exception& e) {
    report(err, error_kind(e), e.what());
    return 1;
  }
}

}  // namespace dualk::cli
