#include "pcakit/cli.hpp"

#include "pcakit/dataset.hpp"
#include "pcakit/error.hpp"
#include "pcakit/kernels.hpp"
#include "pcakit/linalg.hpp"
#include "pcakit/model_file.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>

namespace pcakit::cli {

using nlohmann::json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UsageError:
    case ErrorCode::WrongKernelKind:
      return kUsageError;
    case ErrorCode::InvalidDimension:
    case ErrorCode::DegenerateInput:
    case ErrorCode::ParseError:
    case ErrorCode::EmptyInput:
      return kDataError;
    case ErrorCode::SingularSystem:
    case ErrorCode::NotSymmetric:
    case ErrorCode::RankExceeded:
    case ErrorCode::NotPositiveSemidefinite:
    case ErrorCode::ComplexEigenvalues:
      return kNumericError;
    case ErrorCode::ReconstructionUnsupported:
      return kUnsupported;
  }
  return kDataError;
}

namespace {

struct DataOptions {
  std::string path;
  bool no_header = false;
  std::string delimiter = ",";
  std::optional<std::string> labels;
  std::optional<std::string> id_column;
  bool standardize = false;

  void attach(CLI::App* cmd, bool required_data = true, bool with_standardize = true) {
    auto* opt = cmd->add_option("--data", path, "Input CSV (rows = samples)");
    if (required_data) opt->required();
    cmd->add_flag("--no-header", no_header, "CSV has no header row");
    cmd->add_option("--delimiter", delimiter, "CSV field delimiter");
    cmd->add_option("--labels", labels, "Label column (header name or zero-based index)");
    cmd->add_option("--id-column", id_column, "Sample id column");
    if (with_standardize) cmd->add_flag("--standardize", standardize, "Standardize features to zero mean, unit variance");
  }

  Dataset load() const {
    if (delimiter.size() != 1) throw Error(ErrorCode::UsageError, "--delimiter must be a single character");
    CsvOptions options;
    options.has_header = !no_header;
    options.label_column = labels;
    options.id_column = id_column;
    options.delimiter = delimiter.front();
    return load_csv(path, options);
  }
};

struct KernelOptions {
  std::optional<std::string> kernel;
  std::optional<double> gamma;
  std::optional<double> c1;
  std::optional<double> c2;
  std::optional<double> c3;

  void attach(CLI::App* cmd) {
    cmd->add_option("--kernel", kernel, "linear|polynomial|rbf|sigmoid|cosine");
    cmd->add_option("--gamma", gamma, "RBF width parameter");
    cmd->add_option("--c1", c1, "Kernel constant c1");
    cmd->add_option("--c2", c2, "Kernel constant c2");
    cmd->add_option("--c3", c3, "Polynomial degree c3");
  }

  bool any() const { return kernel || gamma || c1 || c2 || c3; }

  KernelSpec resolve(Index d) const {
    const auto family = kernel_family_from_string(kernel.value_or("linear"));
    if (family == KernelFamily::delta) throw Error(ErrorCode::UsageError, "delta is a label kernel; use --label-kernel");
    KernelSpec spec = KernelSpec::defaults(family, d);
    if (gamma) spec.gamma = *gamma;
    if (c1) spec.c1 = *c1;
    if (c2) spec.c2 = *c2;
    if (c3) spec.c3 = *c3;
    validate(spec);
    return spec;
  }
};

struct Outputs {
  std::ostream& out;
  std::ostream& err;
};

// Writes to --output when given, else to standard output.
template <typename Fn>
void emit(const std::optional<std::string>& path, std::ostream& fallback, Fn&& write) {
  if (!path) {
    write(fallback);
    return;
  }
  std::ofstream file(*path);
  if (!file) throw Error(ErrorCode::ParseError, "cannot write '" + *path + "'");
  write(file);
}

std::vector<std::string> component_header(Index p) {
  std::vector<std::string> header;
  for (Index i = 1; i <= p; ++i) header.push_back("component_" + std::to_string(i));
  return header;
}

void write_embedding(std::ostream& os, const Embedding& e, const std::vector<std::string>& ids) {
  write_matrix_csv(os, e.entries.transpose(), component_header(e.components()), ids);
}

KernelSpec label_kernel_spec(const std::optional<std::string>& name) {
  const std::string value = name.value_or("delta");
  if (value == "delta") return KernelSpec{KernelFamily::delta};
  if (value == "linear") return KernelSpec{KernelFamily::linear};
  throw Error(ErrorCode::UsageError, "--label-kernel must be delta or linear, got '" + value + "'");
}

Matrix label_kernel_matrix(const KernelSpec& spec, const Dataset& data) {
  if (!data.labels) throw Error(ErrorCode::UsageError, "supervised methods need --labels");
  if (spec.family == KernelFamily::delta) return delta_kernel(*data.labels).entries;
  if (auto y = data.numeric_labels()) return linear_label_kernel(y->transpose());
  return linear_label_kernel(one_hot(*data.labels).entries);
}

// Real-valued labels for feature scoring: numeric labels as-is, categories as
// their first-appearance class index.
Vector scoring_labels(const Dataset& data) {
  if (!data.labels) throw Error(ErrorCode::UsageError, "feature scoring needs --labels");
  if (auto y = data.numeric_labels()) return *y;
  const LabelMatrix encoded = one_hot(*data.labels);
  Vector codes(encoded.entries.cols());
  for (Index s = 0; s < codes.size(); ++s) {
    Index cls = 0;
    encoded.entries.col(s).maxCoeff(&cls);
    codes(s) = static_cast<double>(cls);
  }
  return codes;
}

Index model_dims(const ModelFile& file) {
  return std::visit(
      [](const auto& m) -> Index {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearSubspaceModel>) return m.dims();
        else if constexpr (std::is_same_v<T, DualModel>) return m.dims();
        else if constexpr (std::is_same_v<T, ScoringSpcaModel>) return m.scores.size();
        else return m.train_data.dims();
      },
      file.model);
}

DataMatrix prepare_input(const ModelFile& file, const Dataset& data) {
  const Index d = model_dims(file);
  if (data.features.dims() != d) {
    throw Error(ErrorCode::InvalidDimension,
                "model expects " + std::to_string(d) + " features but the data is " +
                    std::to_string(data.features.dims()) + " features x " + std::to_string(data.samples()) +
                    " samples");
  }
  if (file.standardization) return apply_standardization(*file.standardization, data.features);
  return data.features;
}

bool same_bits(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

Embedding embed(const ModelFile& file, const DataMatrix& x) {
  return std::visit(
      [&](const auto& m) -> Embedding {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearSubspaceModel>) {
          return project(m, x);
        } else if constexpr (std::is_same_v<T, DualModel>) {
          if (same_bits(x.values().colwise() - m.mean, m.centered_train)) return project_train(m);
          return project_oos(m, x);
        } else if constexpr (std::is_same_v<T, KernelModel>) {
          if (same_bits(x.values(), m.train_data.values())) return project_train(m);
          return project_oos(m, x);
        } else if constexpr (std::is_same_v<T, ScoringSpcaModel>) {
          return project(m, x);
        } else if constexpr (std::is_same_v<T, DualSpcaModel>) {
          return dual_spca_project(m, x);
        } else if constexpr (std::is_same_v<T, KernelSpcaDirectModel>) {
          if (same_bits(x.values(), m.train_data.values())) return kspca_direct_project_train(m);
          return kspca_direct_project(m, x);
        } else {
          if (same_bits(x.values(), m.train_data.values())) return kspca_dual_project_train(m);
          return kspca_dual_project(m, x);
        }
      },
      file.model);
}

// Reconstruction in the model's (possibly standardized) feature space.
Matrix rebuild(const ModelFile& file, const DataMatrix& x) {
  return std::visit(
      [&](const auto& m) -> Matrix {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearSubspaceModel>) {
          return reconstruct(m, project(m, x));
        } else if constexpr (std::is_same_v<T, DualModel>) {
          if (same_bits(x.values().colwise() - m.mean, m.centered_train)) return reconstruct_train(m);
          return reconstruct_oos(m, x);
        } else if constexpr (std::is_same_v<T, KernelModel>) {
          reconstruct_any(m, same_bits(x.values(), m.train_data.values()) ? ReconstructionTarget::training
                                                                            : ReconstructionTarget::out_of_sample);
        } else if constexpr (std::is_same_v<T, ScoringSpcaModel>) {
          return reconstruct(m.pca, project(m, x));
        } else if constexpr (std::is_same_v<T, DualSpcaModel>) {
          return dual_spca_reconstruct(m, x);
        } else {
          kspca_reconstruct_any(m, same_bits(x.values(), m.train_data.values()) ? ReconstructionTarget::training
                                                                                  : ReconstructionTarget::out_of_sample);
        }
      },
      file.model);
}

Vector model_spectrum(const ModelFile& file) {
  return std::visit(
      [](const auto& m) -> Vector {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearSubspaceModel>) return m.spectrum;
        else if constexpr (std::is_same_v<T, ScoringSpcaModel>) return m.pca.spectrum;
        else if constexpr (std::is_same_v<T, KernelSpcaDirectModel>) return m.eigenvalues;
        else return m.singular.array().square().matrix();
      },
      file.model);
}

json spectrum_json(const SpectrumReport& report) {
  auto to_vec = [](const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  return json{{"eigenvalues", to_vec(report.eigenvalues)},
              {"ratios", to_vec(report.ratios)},
              {"cumulative", to_vec(report.cumulative)}};
}

void write_spectrum_csv(std::ostream& os, const SpectrumReport& report) {
  os << "component,eigenvalue,ratio,cumulative\n";
  for (Index i = 0; i < report.eigenvalues.size(); ++i) {
    os << (i + 1) << ',' << format_double(report.eigenvalues(i)) << ',' << format_double(report.ratios(i)) << ','
       << format_double(report.cumulative(i)) << '\n';
  }
}

// ---------------------------------------------------------------- fit

struct FitOptions {
  DataOptions data;
  KernelOptions kernel;
  std::string method;
  std::optional<Index> components;
  std::optional<std::string> label_kernel;
  std::optional<Index> top_q;
  bool no_center = false;
  std::string model_path;
  std::optional<std::string> output;
};

void check_fit_flags(const FitOptions& o, Method method) {
  if (o.kernel.any() && !is_kernel_method(method)) {
    throw Error(ErrorCode::UsageError, "--kernel and kernel parameters apply only to kpca, kspca-direct, kspca-dual");
  }
  if (is_supervised(method) && !o.data.labels) {
    throw Error(ErrorCode::UsageError, "--method " + std::string(to_string(method)) + " needs --labels");
  }
  if (o.label_kernel && (!is_supervised(method) || method == Method::spca_scoring)) {
    throw Error(ErrorCode::UsageError, "--label-kernel applies only to spca, dual-spca, kspca-direct, kspca-dual");
  }
  if (o.top_q && method != Method::spca_scoring) {
    throw Error(ErrorCode::UsageError, "--top-q applies only to spca-scoring");
  }
  if (o.no_center && method != Method::pca && method != Method::spca_scoring) {
    throw Error(ErrorCode::UsageError, "--no-center applies only to pca and spca-scoring");
  }
}

int run_fit(const FitOptions& o, Outputs io) {
  const Method method = method_from_string(o.method);
  check_fit_flags(o, method);
  Dataset data = o.data.load();

  ModelFile file;
  file.method = method;
  file.feature_names = data.feature_names;
  if (o.data.standardize) file.standardization = standardize(data);
  const DataMatrix& x = data.features;
  const Centering centering = o.no_center ? Centering::none : Centering::mean;

  std::optional<Matrix> ky;
  if (is_supervised(method) && method != Method::spca_scoring) {
    file.label_kernel = label_kernel_spec(o.label_kernel);
    ky = label_kernel_matrix(*file.label_kernel, data);
  }

  switch (method) {
    case Method::pca: file.model = fit_pca_eig(x, o.components, centering); break;
    case Method::dual_pca: file.model = fit_dual(x, o.components); break;
    case Method::kpca: file.model = fit_kpca(x, o.kernel.resolve(x.dims()), o.components); break;
    case Method::spca_scoring: {
      const Vector y = scoring_labels(data);
      file.model = fit_spca_scoring(x, y, o.top_q.value_or(x.dims()), o.components, centering);
      break;
    }
    case Method::spca: file.model = fit_spca(x, *ky, o.components); break;
    case Method::dual_spca: file.model = fit_dual_spca(x, *ky, o.components); break;
    case Method::kspca_direct:
      file.model = fit_kspca_direct(x, o.kernel.resolve(x.dims()), *ky, o.components);
      break;
    case Method::kspca_dual:
      file.model = fit_kspca_dual(x, o.kernel.resolve(x.dims()), *ky, o.components);
      break;
  }

  if (const auto* k = std::get_if<KernelModel>(&file.model); k && k->dropped_negative > 0) {
    io.err << "warning: kernel is indefinite; " << k->dropped_negative << " negative eigenvalues were dropped\n";
  }

  save_model(file, o.model_path);
  const Embedding train = embed(file, x);
  if (o.output) emit(o.output, io.out, [&](std::ostream& os) { write_embedding(os, train, data.sample_ids); });

  json summary{{"method", to_string(method)},
               {"model", o.model_path},
               {"samples", x.samples()},
               {"features", x.dims()},
               {"components", train.components()},
               {"spectrum", spectrum_json(spectrum_report(model_spectrum(file)))}};
  if (is_supervised(method)) {
    const Matrix projected_kernel = train.entries.transpose() * train.entries;
    const Matrix label_kernel = ky ? *ky : Matrix(scoring_labels(data) * scoring_labels(data).transpose());
    summary["hsic"] = hsic(projected_kernel, label_kernel);
  }
  if (const auto* s = std::get_if<ScoringSpcaModel>(&file.model)) summary["selected_features"] = s->selected;
  io.out << summary.dump(2) << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------- others

struct ModelIoOptions {
  DataOptions data;
  std::string model_path;
  std::optional<std::string> output;
};

int run_transform(const ModelIoOptions& o, Outputs io) {
  const ModelFile file = load_model(o.model_path);
  const Dataset data = o.data.load();
  const Embedding e = embed(file, prepare_input(file, data));
  emit(o.output, io.out, [&](std::ostream& os) { write_embedding(os, e, data.sample_ids); });
  return kSuccess;
}

int run_reconstruct(const ModelIoOptions& o, Outputs io) {
  const ModelFile file = load_model(o.model_path);
  const Dataset data = o.data.load();
  Matrix rebuilt = rebuild(file, prepare_input(file, data));

  std::vector<std::string> names = file.feature_names;
  if (const auto* s = std::get_if<ScoringSpcaModel>(&file.model)) {
    std::vector<std::string> kept;
    for (Index i : s->selected) kept.push_back(names.empty() ? "x" + std::to_string(i) : names[static_cast<std::size_t>(i)]);
    names = std::move(kept);
    if (file.standardization) {
      Standardization sub{Vector(static_cast<Index>(s->selected.size())), Vector(static_cast<Index>(s->selected.size()))};
      for (std::size_t r = 0; r < s->selected.size(); ++r) {
        sub.mean(static_cast<Index>(r)) = file.standardization->mean(s->selected[r]);
        sub.scale(static_cast<Index>(r)) = file.standardization->scale(s->selected[r]);
      }
      rebuilt = invert_standardization(sub, rebuilt);
    }
  } else if (file.standardization) {
    rebuilt = invert_standardization(*file.standardization, rebuilt);
  }
  emit(o.output, io.out, [&](std::ostream& os) { write_matrix_csv(os, rebuilt.transpose(), names, data.sample_ids); });
  return kSuccess;
}

struct SpectrumOptions {
  DataOptions data;
  std::optional<std::string> model_path;
  std::optional<std::string> output;
};

int run_spectrum(const SpectrumOptions& o, Outputs io) {
  if (o.model_path.has_value() == !o.data.path.empty()) {
    throw Error(ErrorCode::UsageError, "spectrum needs exactly one of --model or --data");
  }
  Vector eigenvalues;
  if (o.model_path) {
    eigenvalues = model_spectrum(load_model(*o.model_path));
  } else {
    Dataset data = o.data.load();
    if (o.data.standardize) standardize(data);
    eigenvalues = sym_eig_sorted(scatter_matrix(data.features)).values.cwiseMax(0.0);
  }
  const SpectrumReport report = spectrum_report(eigenvalues);
  emit(o.output, io.out, [&](std::ostream& os) { write_spectrum_csv(os, report); });
  return kSuccess;
}

struct ScoreOptions {
  DataOptions data;
  std::optional<std::string> output;
};

int run_score(const ScoreOptions& o, Outputs io) {
  if (!o.data.labels) throw Error(ErrorCode::UsageError, "score-features needs --labels");
  Dataset data = o.data.load();
  if (o.data.standardize) standardize(data);
  const FeatureScores scores = score_features(data.features, scoring_labels(data));
  emit(o.output, io.out, [&](std::ostream& os) {
    os << "rank,feature,index,score\n";
    for (std::size_t r = 0; r < scores.order.size(); ++r) {
      const Index j = scores.order[r];
      os << (r + 1) << ',' << data.feature_names[static_cast<std::size_t>(j)] << ',' << j << ','
         << format_double(scores.scores(j)) << '\n';
    }
  });
  return kSuccess;
}

struct HsicOptions {
  DataOptions data;
  KernelOptions kernel;
  std::optional<std::string> label_kernel;
};

int run_hsic(const HsicOptions& o, Outputs io) {
  if (!o.data.labels) throw Error(ErrorCode::UsageError, "hsic needs --labels");
  Dataset data = o.data.load();
  if (o.data.standardize) standardize(data);
  const Matrix kx = kernel_matrix(o.kernel.resolve(data.features.dims()), data.features).entries;
  const Matrix ky = label_kernel_matrix(label_kernel_spec(o.label_kernel), data);
  io.out << format_double(hsic(kx, ky)) << '\n';
  return kSuccess;
}

struct SplitOptions {
  DataOptions data;
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
  std::string output;
};

int run_split(const SplitOptions& o, Outputs io) {
  const Dataset data = o.data.load();
  const auto [train, test] = split(data, o.test_fraction, o.seed);
  const std::string train_path = o.output + ".train.csv";
  const std::string test_path = o.output + ".test.csv";
  emit(train_path, io.out, [&](std::ostream& os) { write_csv(os, train); });
  emit(test_path, io.out, [&](std::ostream& os) { write_csv(os, test); });
  io.out << json{{"train", train_path}, {"test", test_path}, {"train_samples", train.samples()},
                 {"test_samples", test.samples()}}
                .dump(2)
         << '\n';
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"PCA, dual/kernel PCA and supervised PCA on CSV data", "pcakit"};
  app.require_subcommand(1);

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a model and save it");
  fit.data.attach(fit_cmd);
  fit.kernel.attach(fit_cmd);
  fit_cmd->add_option("--method", fit.method,
                      "pca|dual-pca|kpca|spca-scoring|spca|dual-spca|kspca-direct|kspca-dual")
      ->required();
  fit_cmd->add_option("--components", fit.components, "Number of components (default: effective rank)");
  fit_cmd->add_option("--label-kernel", fit.label_kernel, "delta|linear (default delta)");
  fit_cmd->add_option("--top-q", fit.top_q, "Features kept by spca-scoring");
  fit_cmd->add_flag("--no-center", fit.no_center, "Do not subtract the training mean (LSI mode)");
  fit_cmd->add_option("--model", fit.model_path, "Model file to write")->required();
  fit_cmd->add_option("--output", fit.output, "Training embedding CSV");

  ModelIoOptions transform;
  auto* transform_cmd = app.add_subcommand("transform", "Embed data with a saved model");
  transform.data.attach(transform_cmd, true, false);
  transform_cmd->add_option("--model", transform.model_path, "Model file")->required();
  transform_cmd->add_option("--output", transform.output, "Embedding CSV (default stdout)");

  ModelIoOptions recon;
  auto* recon_cmd = app.add_subcommand("reconstruct", "Project and reconstruct data with a saved model");
  recon.data.attach(recon_cmd, true, false);
  recon_cmd->add_option("--model", recon.model_path, "Model file")->required();
  recon_cmd->add_option("--output", recon.output, "Reconstruction CSV (default stdout)");

  SpectrumOptions spectrum;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Eigenvalue ratios for scree analysis");
  spectrum.data.attach(spectrum_cmd, false);
  spectrum_cmd->add_option("--model", spectrum.model_path, "Model file");
  spectrum_cmd->add_option("--output", spectrum.output, "Spectrum CSV (default stdout)");

  ScoreOptions score;
  auto* score_cmd = app.add_subcommand("score-features", "Score features against a label column");
  score.data.attach(score_cmd);
  score_cmd->add_option("--output", score.output, "Scores CSV (default stdout)");

  HsicOptions hsic_opts;
  auto* hsic_cmd = app.add_subcommand("hsic", "HSIC between data and labels");
  hsic_opts.data.attach(hsic_cmd);
  hsic_opts.kernel.attach(hsic_cmd);
  hsic_cmd->add_option("--label-kernel", hsic_opts.label_kernel, "delta|linear (default delta)");

  SplitOptions split_opts;
  auto* split_cmd = app.add_subcommand("split", "Seeded train/test split");
  split_opts.data.attach(split_cmd, true, false);
  split_cmd->add_option("--test-fraction", split_opts.test_fraction, "Fraction of samples in the test set");
  split_cmd->add_option("--seed", split_opts.seed, "Shuffle seed");
  split_cmd->add_option("--output", split_opts.output, "Output prefix; writes PREFIX.train.csv and PREFIX.test.csv")
      ->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "UsageError: " << e.what() << '\n';
    return kUsageError;
  }

  const Outputs io{out, err};
  try {
    if (fit_cmd->parsed()) return run_fit(fit, io);
    if (transform_cmd->parsed()) return run_transform(transform, io);
    if (recon_cmd->parsed()) return run_reconstruct(recon, io);
    if (spectrum_cmd->parsed()) return run_spectrum(spectrum, io);
    if (score_cmd->parsed()) return run_score(score, io);
    if (hsic_cmd->parsed()) return run_hsic(hsic_opts, io);
    if (split_cmd->parsed()) return run_split(split_opts, io);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}

}  // namespace pcakit::cli
