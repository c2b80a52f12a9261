#include "dualk/persistence.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dualk/error.hpp"

namespace dualk {
namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "dualk-model";
constexpr double kOrthoTolerance = 1e-10;

json matrix_json(const Matrix& m) {
  json data = json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

json matrix_json(const PointMatrix& m) {
  json data = json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

json vector_json(const Vector& v) {
  json data = json::array();
  for (Index i = 0; i < v.size(); ++i) data.push_back(v(i));
  return data;
}

template <class M>
M matrix_from(const json& j) {
  const Index rows = j.at("rows").get<Index>();
  const Index cols = j.at("cols").get<Index>();
  const json& data = j.at("data");
  if (rows < 0 || cols < 0 || !data.is_array() || static_cast<Index>(data.size()) != rows * cols)
    throw SchemaError("matrix payload does not match its shape");
  M m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index jj = 0; jj < cols; ++jj) {
      const json& x = data[static_cast<std::size_t>(i * cols + jj)];
      if (!x.is_number()) throw SchemaError("matrix entry is not a number");
      m(i, jj) = x.get<double>();
    }
  return m;
}

Vector vector_from(const json& j) {
  if (!j.is_array()) throw SchemaError("expected an array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw SchemaError("vector entry is not a number");
    v(static_cast<Index>(i)) = j[i].get<double>();
  }
  return v;
}

json spec_json(const KernelSpec& spec) {
  return {{"family", family_name(spec.family())}, {"degree", spec.degree()}, {"theta", spec.theta()}, {"width", spec.width()}};
}

KernelSpec spec_from(const json& j) {
  const auto family = parse_family(j.at("family").get<std::string>());
  const double theta = j.at("theta").get<double>();
  switch (family) {
    case KernelFamily::HomogeneousPoly: return KernelSpec::homogeneous(j.at("degree").get<int>(), theta);
    case KernelFamily::InhomogeneousPoly: return KernelSpec::inhomogeneous(j.at("degree").get<int>(), theta);
    case KernelFamily::Gaussian: return KernelSpec::gaussian(j.at("width").get<double>(), theta);
  }
  throw SchemaError("unknown kernel family");
}

json feature_order_json(const std::vector<Feature>& features) {
  json out = json::array();
  for (const auto& f : features)
    out.push_back({{"degree", f.degree}, {"label", label_name(f.label)}, {"index", f.index}, {"quantum", f.quantum}});
  return out;
}

void check_feature_order(const json& stored, const std::vector<Feature>& features) {
  if (!stored.is_array() || stored.size() != features.size()) throw SchemaError("feature order does not match layers");
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& f = features[i];
    const json& s = stored[i];
    if (s.at("degree").get<int>() != f.degree || s.at("label").get<std::string>() != label_name(f.label) ||
        s.at("index").get<Index>() != f.index || s.at("quantum").get<double>() != f.quantum)
      throw SchemaError("feature order entry " + std::to_string(i) + " does not match layers");
  }
}

json avica_json(const AvicaModel& m) {
  json layers = json::array();
  for (const auto& l : m.layers)
    layers.push_back({{"degree", l.degree},
                      {"epsilon", l.epsilon},
                      {"dropped", l.dropped},
                      {"v", matrix_json(l.v)},
                      {"s", vector_json(l.s)},
                      {"v_perp", matrix_json(l.v_perp)},
                      {"s_perp", vector_json(l.s_perp)}});
  return {{"spec", spec_json(m.spec)},
          {"anchors", matrix_json(m.anchors.values())},
          {"epsilon", m.epsilon},
          {"rank_caps", m.rank_caps},
          {"layers", std::move(layers)},
          {"feature_order", feature_order_json(m.features)}};
}

AvicaModel avica_from(const json& j) {
  AvicaModel m{spec_from(j.at("spec")), DataMatrix(matrix_from<PointMatrix>(j.at("anchors"))),
               j.at("epsilon").get<double>(), j.at("rank_caps").get<std::vector<Index>>(), {}, {}};
  for (const json& l : j.at("layers")) {
    DegreeLayer layer;
    layer.degree = l.at("degree").get<int>();
    layer.epsilon = l.at("epsilon").get<double>();
    layer.dropped = l.at("dropped").get<Index>();
    layer.v = matrix_from<Matrix>(l.at("v"));
    layer.s = vector_from(l.at("s"));
    layer.v_perp = matrix_from<Matrix>(l.at("v_perp"));
    layer.s_perp = vector_from(l.at("s_perp"));
    m.layers.push_back(std::move(layer));
  }
  validate_model(m);
  m.features = informativity_order(m.layers, m.spec.theta());
  check_feature_order(j.at("feature_order"), m.features);
  return m;
}

json ipca_json(const IpcaModel& m) {
  return {{"spec", spec_json(m.spec)},
          {"anchors", matrix_json(m.anchors.values())},
          {"epsilon", m.epsilon},
          {"v", matrix_json(m.v)},
          {"sigma", vector_json(m.sigma)},
          {"feature_order", feature_order_json(m.features)}};
}

IpcaModel ipca_from(const json& j) {
  IpcaModel m{spec_from(j.at("spec")), DataMatrix(matrix_from<PointMatrix>(j.at("anchors"))),
              j.at("epsilon").get<double>(), matrix_from<Matrix>(j.at("v")), vector_from(j.at("sigma")), {}};
  if (m.sigma.size() != m.v.rows()) throw SchemaError("sigma length does not match feature count");
  m.features = ipca_features(m.v, m.sigma, m.epsilon, m.spec.degree());
  validate_model(m);
  check_feature_order(j.at("feature_order"), m.features);
  return m;
}

json one_vs_all_json(const OneVsAllModel& m) {
  json classes = json::array();
  for (const auto& [id, cm] : m.class_models) classes.push_back({{"id", id}, {"model", avica_json(cm)}});
  return {{"spec", spec_json(m.spec)},
          {"anchor_pool", matrix_json(m.anchor_pool.values())},
          {"max_degree", m.max_degree},
          {"classes", std::move(classes)}};
}

OneVsAllModel one_vs_all_from(const json& j) {
  OneVsAllModel m{spec_from(j.at("spec")), DataMatrix(matrix_from<PointMatrix>(j.at("anchor_pool"))),
                  j.at("max_degree").get<int>(), {}};
  for (const json& c : j.at("classes")) {
    const int id = c.at("id").get<int>();
    if (!m.class_models.emplace(id, avica_from(c.at("model"))).second)
      throw SchemaError("duplicate class id " + std::to_string(id));
  }
  validate_model(m);
  return m;
}

void check_orthonormal_rows(const Matrix& a, const Matrix& b, const std::string& what) {
  Matrix stacked(a.rows() + b.rows(), a.cols());
  stacked << a, b;
  if (stacked.rows() == 0) return;
  const Matrix gram = stacked * stacked.transpose();
  const double err = (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (!(err <= kOrthoTolerance)) throw SchemaError(what + " rows are not orthonormal");
}

bool descending(const Vector& v) {
  for (Index i = 1; i < v.size(); ++i)
    if (v(i) > v(i - 1)) return false;
  return true;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PersistenceError("cannot open model file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void validate_model(const AvicaModel& m) {
  if (m.spec.is_polynomial() && m.spec.degree() != 1) throw SchemaError("base kernel must have degree 1");
  if (!(m.epsilon > 0.0) || !std::isfinite(m.epsilon)) throw SchemaError("epsilon must be > 0");
  if (m.layers.empty()) throw SchemaError("model has no layers");
  if (m.rank_caps.size() > m.layers.size()) throw SchemaError("more rank caps than layers");
  const Index d_anchors = m.anchors.size();
  double expected_eps = m.epsilon;
  for (std::size_t k = 0; k < m.layers.size(); ++k) {
    const auto& l = m.layers[k];
    const std::string where = "layer " + std::to_string(k + 1);
    if (l.degree != static_cast<int>(k) + 1) throw SchemaError(where + " has degree " + std::to_string(l.degree));
    expected_eps *= m.spec.theta();
    if (!(std::abs(l.epsilon - expected_eps) <= 1e-12 * expected_eps)) throw SchemaError(where + " threshold breaks the theta schedule");
    if (l.v.cols() != d_anchors || l.v_perp.cols() != d_anchors) throw SchemaError(where + " width differs from anchor count");
    if (l.s.size() != l.v.rows() || l.s_perp.size() != l.v_perp.rows()) throw SchemaError(where + " singular value count mismatch");
    if (l.dropped < 0 || l.v.rows() + l.v_perp.rows() + l.dropped > d_anchors) throw SchemaError(where + " has too many directions");
    if (!l.s.allFinite() || !l.s_perp.allFinite() || !l.v.allFinite() || !l.v_perp.allFinite())
      throw SchemaError(where + " has non-finite entries");
    if (!descending(l.s) || !descending(l.s_perp)) throw SchemaError(where + " singular values not descending");
    const bool capped = k < m.rank_caps.size();
    for (Index i = 0; i < l.s.size(); ++i)
      if (!(l.s(i) >= l.epsilon)) throw SchemaError(where + " retains a value below its threshold");
    for (Index i = 0; i < l.s_perp.size(); ++i) {
      if (!(l.s_perp(i) > 0.0)) throw SchemaError(where + " has a non-positive generative value");
      if (!capped && !(l.s_perp(i) < l.epsilon)) throw SchemaError(where + " rejects a value above its threshold");
    }
    check_orthonormal_rows(l.v, l.v_perp, where);
  }
}

void validate_model(const IpcaModel& m) {
  if (!(m.epsilon >= 0.0) || !std::isfinite(m.epsilon)) throw SchemaError("epsilon must be >= 0");
  if (m.v.cols() != m.anchors.size()) throw SchemaError("feature width differs from anchor count");
  if (m.sigma.size() != m.v.rows()) throw SchemaError("sigma length does not match feature count");
  if (!m.sigma.allFinite() || !m.v.allFinite()) throw SchemaError("non-finite model entries");
  if (!descending(m.sigma) || (m.sigma.size() > 0 && m.sigma.minCoeff() < 0.0))
    throw SchemaError("singular values must be descending and >= 0");
  check_orthonormal_rows(m.v, Matrix(0, m.v.cols()), "feature");
}

void validate_model(const OneVsAllModel& m) {
  if (m.class_models.size() < 2) throw SchemaError("one-vs-all model needs at least two classes");
  for (const auto& [id, cm] : m.class_models) {
    validate_model(cm);
    if (!(cm.spec == m.spec)) throw SchemaError("class " + std::to_string(id) + " uses a different kernel");
    if (!(cm.anchors == m.anchor_pool)) throw SchemaError("class " + std::to_string(id) + " uses different anchors");
    if (cm.max_degree() != m.max_degree) throw SchemaError("class " + std::to_string(id) + " has a different degree");
  }
}

std::string serialize_model(const AnyModel& model) {
  json body = std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, AvicaModel>) return {{"kind", "avica"}, {"model", avica_json(m)}};
        else if constexpr (std::is_same_v<T, IpcaModel>) return {{"kind", "ipca"}, {"model", ipca_json(m)}};
        else return {{"kind", "one_vs_all"}, {"model", one_vs_all_json(m)}};
      },
      model);
  body["format"] = kFormatTag;
  body["version"] = kModelFormatVersion;
  return body.dump(1) + "\n";
}

AnyModel deserialize_model(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw CorruptFileError(std::string("model file is not valid: ") + e.what());
  }
  if (!j.is_object() || !j.contains("format") || j["format"] != kFormatTag)
    throw CorruptFileError("not a dualk model file");
  if (!j.contains("version") || !j["version"].is_number_integer()) throw SchemaError("model file has no version");
  const int version = j["version"].get<int>();
  if (version != kModelFormatVersion)
    throw VersionError("model format version " + std::to_string(version) + " is not supported (expected " +
                       std::to_string(kModelFormatVersion) + ")");
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const json& body = j.at("model");
    if (kind == "avica") return avica_from(body);
    if (kind == "ipca") return ipca_from(body);
    if (kind == "one_vs_all") return one_vs_all_from(body);
    throw SchemaError("unknown model kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw SchemaError(std::string("model file violates the schema: ") + e.what());
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(std::string("model file violates the schema: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const AnyModel& model) {
  const std::string text = serialize_model(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PersistenceError("cannot write model file '" + path.string() + "'");
  out << text;
  if (!out) throw PersistenceError("write to '" + path.string() + "' failed");
}

AnyModel load_model(const std::filesystem::path& path) { return deserialize_model(slurp(path)); }

AvicaModel load_avica_model(const std::filesystem::path& path) {
  AnyModel m = load_model(path);
  if (auto* a = std::get_if<AvicaModel>(&m)) return std::move(*a);
  throw SchemaError("'" + path.string() + "' does not hold an avica model");
}

}  // namespace dualk
