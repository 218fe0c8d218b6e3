#include "pcakit/model_file.hpp"

#include "pcakit/error.hpp"

#include <fstream>

namespace pcakit {

using nlohmann::json;

std::string_view to_string(Method method) {
  switch (method) {
    case Method::pca: return "pca";
    case Method::dual_pca: return "dual-pca";
    case Method::kpca: return "kpca";
    case Method::spca_scoring: return "spca-scoring";
    case Method::spca: return "spca";
    case Method::dual_spca: return "dual-spca";
    case Method::kspca_direct: return "kspca-direct";
    case Method::kspca_dual: return "kspca-dual";
  }
  return "pca";
}

Method method_from_string(std::string_view name) {
  for (auto m : {Method::pca, Method::dual_pca, Method::kpca, Method::spca_scoring, Method::spca, Method::dual_spca,
                 Method::kspca_direct, Method::kspca_dual}) {
    if (name == to_string(m)) return m;
  }
  throw Error(ErrorCode::UsageError, "unknown method '" + std::string(name) + "'");
}

bool is_kernel_method(Method method) {
  return method == Method::kpca || method == Method::kspca_direct || method == Method::kspca_dual;
}

bool is_supervised(Method method) {
  return method == Method::spca_scoring || method == Method::spca || method == Method::dual_spca ||
         method == Method::kspca_direct || method == Method::kspca_dual;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

Matrix matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Index>();
  const auto cols = j.at("cols").get<Index>();
  const auto& data = j.at("data");
  if (static_cast<Index>(data.size()) != rows) throw Error(ErrorCode::ParseError, "matrix row count mismatch");
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const auto& row = data.at(static_cast<std::size_t>(r));
    if (static_cast<Index>(row.size()) != cols) throw Error(ErrorCode::ParseError, "matrix column count mismatch");
    for (Index c = 0; c < cols; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

namespace {

json vector_to_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Vector vector_from_json(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

json kernel_to_json(const KernelSpec& spec) {
  return json{{"family", to_string(spec.family)}, {"c1", spec.c1}, {"c2", spec.c2}, {"c3", spec.c3},
              {"gamma", spec.gamma}};
}

KernelSpec kernel_from_json(const json& j) {
  KernelSpec spec;
  spec.family = kernel_family_from_string(j.at("family").get<std::string>());
  spec.c1 = j.at("c1").get<double>();
  spec.c2 = j.at("c2").get<double>();
  spec.c3 = j.at("c3").get<double>();
  spec.gamma = j.at("gamma").get<double>();
  return spec;
}

json indices_to_json(const std::vector<Index>& v) { return json(v); }

void write_linear(json& doc, const LinearSubspaceModel& m) {
  doc["matrices"]["directions"] = matrix_to_json(m.directions);
  doc["mean"] = vector_to_json(m.mean);
  doc["spectrum"] = vector_to_json(m.spectrum);
  doc["centered"] = m.centered;
}

LinearSubspaceModel read_linear(const json& doc) {
  LinearSubspaceModel m;
  m.directions = matrix_from_json(doc.at("matrices").at("directions"));
  m.mean = vector_from_json(doc.at("mean"));
  m.spectrum = vector_from_json(doc.at("spectrum"));
  m.centered = doc.at("centered").get<bool>();
  return m;
}

struct Writer {
  json& doc;

  void operator()(const LinearSubspaceModel& m) { write_linear(doc, m); }

  void operator()(const DualModel& m) {
    doc["matrices"]["right_vectors"] = matrix_to_json(m.right_vectors);
    doc["matrices"]["centered_train"] = matrix_to_json(m.centered_train);
    doc["mean"] = vector_to_json(m.mean);
    doc["spectrum"] = vector_to_json(m.singular.array().square().matrix());
    doc["singular"] = vector_to_json(m.singular);
    doc["centered"] = true;
  }

  void operator()(const KernelModel& m) {
    doc["kernel"] = kernel_to_json(m.spec);
    doc["matrices"]["right_vectors"] = matrix_to_json(m.right_vectors);
    doc["matrices"]["train_data"] = matrix_to_json(m.train_data.values());
    doc["matrices"]["train_kernel"] = matrix_to_json(m.train_kernel);
    doc["singular"] = vector_to_json(m.singular);
    doc["spectrum"] = vector_to_json(m.singular.array().square().matrix());
    doc["dropped_negative"] = m.dropped_negative;
  }

  void operator()(const ScoringSpcaModel& m) {
    write_linear(doc, m.pca);
    doc["selected_features"] = indices_to_json(m.selected);
    doc["feature_scores"] = vector_to_json(m.scores);
  }

  void operator()(const DualSpcaModel& m) {
    doc["matrices"]["delta"] = matrix_to_json(m.delta);
    doc["matrices"]["right_vectors"] = matrix_to_json(m.right_vectors);
    doc["matrices"]["train_data"] = matrix_to_json(m.train_data.values());
    doc["singular"] = vector_to_json(m.singular);
    doc["spectrum"] = vector_to_json(m.singular.array().square().matrix());
    doc["mean"] = vector_to_json(m.mean);
    doc["centered"] = m.centered;
  }

  void operator()(const KernelSpcaDirectModel& m) {
    doc["kernel"] = kernel_to_json(m.spec);
    doc["matrices"]["theta"] = matrix_to_json(m.theta);
    doc["matrices"]["train_data"] = matrix_to_json(m.train_data.values());
    doc["matrices"]["train_kernel"] = matrix_to_json(m.train_kernel);
    doc["spectrum"] = vector_to_json(m.eigenvalues);
    doc["mean"] = vector_to_json(m.mean);
    doc["centered"] = m.centered;
    doc["ridge"] = m.ridge;
  }

  void operator()(const KernelSpcaDualModel& m) {
    doc["kernel"] = kernel_to_json(m.spec);
    doc["matrices"]["delta"] = matrix_to_json(m.delta);
    doc["matrices"]["right_vectors"] = matrix_to_json(m.right_vectors);
    doc["matrices"]["train_data"] = matrix_to_json(m.train_data.values());
    doc["matrices"]["train_kernel"] = matrix_to_json(m.train_kernel);
    doc["singular"] = vector_to_json(m.singular);
    doc["spectrum"] = vector_to_json(m.singular.array().square().matrix());
    doc["mean"] = vector_to_json(m.mean);
    doc["centered"] = m.centered;
  }
};

FittedModel read_model(Method method, const json& doc) {
  const auto& mats = doc.at("matrices");
  switch (method) {
    case Method::pca:
    case Method::spca:
      return read_linear(doc);
    case Method::dual_pca: {
      DualModel m;
      m.right_vectors = matrix_from_json(mats.at("right_vectors"));
      m.centered_train = matrix_from_json(mats.at("centered_train"));
      m.mean = vector_from_json(doc.at("mean"));
      m.singular = vector_from_json(doc.at("singular"));
      return m;
    }
    case Method::kpca: {
      KernelModel m;
      m.spec = kernel_from_json(doc.at("kernel"));
      m.right_vectors = matrix_from_json(mats.at("right_vectors"));
      m.train_data = DataMatrix(matrix_from_json(mats.at("train_data")));
      m.train_kernel = matrix_from_json(mats.at("train_kernel"));
      m.singular = vector_from_json(doc.at("singular"));
      m.dropped_negative = doc.value("dropped_negative", Index{0});
      return m;
    }
    case Method::spca_scoring: {
      ScoringSpcaModel m;
      m.pca = read_linear(doc);
      m.selected = doc.at("selected_features").get<std::vector<Index>>();
      m.scores = vector_from_json(doc.at("feature_scores"));
      return m;
    }
    case Method::dual_spca: {
      DualSpcaModel m;
      m.delta = matrix_from_json(mats.at("delta"));
      m.right_vectors = matrix_from_json(mats.at("right_vectors"));
      m.train_data = DataMatrix(matrix_from_json(mats.at("train_data")));
      m.singular = vector_from_json(doc.at("singular"));
      m.mean = vector_from_json(doc.at("mean"));
      m.centered = doc.at("centered").get<bool>();
      return m;
    }
    case Method::kspca_direct: {
      KernelSpcaDirectModel m;
      m.spec = kernel_from_json(doc.at("kernel"));
      m.theta = matrix_from_json(mats.at("theta"));
      m.train_data = DataMatrix(matrix_from_json(mats.at("train_data")));
      m.train_kernel = matrix_from_json(mats.at("train_kernel"));
      m.eigenvalues = vector_from_json(doc.at("spectrum"));
      m.mean = vector_from_json(doc.at("mean"));
      m.centered = doc.at("centered").get<bool>();
      m.ridge = doc.at("ridge").get<double>();
      return m;
    }
    case Method::kspca_dual: {
      KernelSpcaDualModel m;
      m.spec = kernel_from_json(doc.at("kernel"));
      m.delta = matrix_from_json(mats.at("delta"));
      m.right_vectors = matrix_from_json(mats.at("right_vectors"));
      m.train_data = DataMatrix(matrix_from_json(mats.at("train_data")));
      m.train_kernel = matrix_from_json(mats.at("train_kernel"));
      m.singular = vector_from_json(doc.at("singular"));
      m.mean = vector_from_json(doc.at("mean"));
      m.centered = doc.at("centered").get<bool>();
      return m;
    }
  }
  throw Error(ErrorCode::ParseError, "unhandled method");
}

}  // namespace

json to_json(const ModelFile& file) {
  json doc;
  doc["schema_version"] = file.schema_version;
  doc["method"] = to_string(file.method);
  doc["matrices"] = json::object();
  std::visit(Writer{doc}, file.model);
  doc["label_kernel"] = file.label_kernel ? kernel_to_json(*file.label_kernel) : json(nullptr);
  if (file.standardization) {
    doc["standardization"] = json{{"mean", vector_to_json(file.standardization->mean)},
                                  {"scale", vector_to_json(file.standardization->scale)}};
  } else {
    doc["standardization"] = nullptr;
  }
  doc["feature_names"] = file.feature_names;
  return doc;
}

ModelFile model_from_json(const json& doc) {
  try {
    ModelFile file;
    file.schema_version = doc.at("schema_version").get<int>();
    if (file.schema_version != ModelFile::kSchemaVersion) {
      throw Error(ErrorCode::ParseError, "unsupported model schema_version " + std::to_string(file.schema_version));
    }
    file.method = method_from_string(doc.at("method").get<std::string>());
    file.model = read_model(file.method, doc);
    if (doc.contains("label_kernel") && !doc.at("label_kernel").is_null()) {
      file.label_kernel = kernel_from_json(doc.at("label_kernel"));
    }
    if (doc.contains("standardization") && !doc.at("standardization").is_null()) {
      const auto& s = doc.at("standardization");
      file.standardization = Standardization{vector_from_json(s.at("mean")), vector_from_json(s.at("scale"))};
    }
    if (doc.contains("feature_names")) file.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    return file;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed model file: ") + e.what());
  }
}

void save_model(const ModelFile& file, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write '" + path.string() + "'");
  out << to_json(file).dump(1) << '\n';
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open model '" + path.string() + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("model file is not valid JSON: ") + e.what());
  }
  return model_from_json(doc);
}

}  // namespace pcakit
