#pragma once
// Versioned JSON model documents. Matrices are stored row-major as nested
// arrays; doubles are written in shortest round-trip form, so load(save(m))
// reproduces every finite value bit for bit.

#include "pcakit/dataset.hpp"
#include "pcakit/dual_pca.hpp"
#include "pcakit/kernel_pca.hpp"
#include "pcakit/kernel_spca.hpp"
#include "pcakit/pca.hpp"
#include "pcakit/spca.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pcakit {

enum class Method { pca, dual_pca, kpca, spca_scoring, spca, dual_spca, kspca_direct, kspca_dual };

std::string_view to_string(Method method);
Method method_from_string(std::string_view name);
bool is_kernel_method(Method method);
bool is_supervised(Method method);

using FittedModel = std::variant<LinearSubspaceModel, DualModel, KernelModel, ScoringSpcaModel, DualSpcaModel,
                                 KernelSpcaDirectModel, KernelSpcaDualModel>;

struct ModelFile {
  static constexpr int kSchemaVersion = 1;

  int schema_version = kSchemaVersion;
  Method method = Method::pca;
  FittedModel model;
  std::optional<KernelSpec> label_kernel;
  std::optional<Standardization> standardization;
  std::vector<std::string> feature_names;
};

nlohmann::json to_json(const ModelFile& file);
ModelFile model_from_json(const nlohmann::json& doc);

void save_model(const ModelFile& file, const std::filesystem::path& path);
ModelFile load_model(const std::filesystem::path& path);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

}  // namespace pcakit
