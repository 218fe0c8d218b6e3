#include "pcakit/dataset.hpp"

#include "pcakit/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace pcakit {

namespace {

std::vector<std::string> split_line(const std::string& line, char delimiter) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, delimiter)) cells.push_back(cell);
  if (!line.empty() && line.back() == delimiter) cells.emplace_back();
  for (auto& c : cells) {
    const auto first = c.find_first_not_of(" \t\r");
    const auto last = c.find_last_not_of(" \t\r");
    c = first == std::string::npos ? std::string() : c.substr(first, last - first + 1);
  }
  return cells;
}

std::optional<double> parse_number(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const char* begin = text.data();
  if (*begin == '+') ++begin;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<std::size_t> find_column(const std::optional<std::string>& name,
                                       const std::vector<std::string>& header, bool has_header) {
  if (!name) return std::nullopt;
  if (has_header) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == *name) return i;
    }
  }
  std::size_t index = 0;
  const auto [ptr, ec] = std::from_chars(name->data(), name->data() + name->size(), index);
  if (ec == std::errc() && ptr == name->data() + name->size() && (header.empty() || index < header.size())) {
    return index;
  }
  throw Error(ErrorCode::UsageError, "column '" + *name + "' not found");
}

}  // namespace

std::optional<Vector> Dataset::numeric_labels() const {
  if (!labels) return std::nullopt;
  Vector out(static_cast<Index>(labels->size()));
  for (std::size_t i = 0; i < labels->size(); ++i) {
    const auto value = parse_number((*labels)[i]);
    if (!value || !std::isfinite(*value)) return std::nullopt;
    out(static_cast<Index>(i)) = *value;
  }
  return out;
}

Dataset parse_csv(std::istream& in, const CsvOptions& options) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(split_line(line, options.delimiter));
    line_numbers.push_back(line_no);
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "CSV input has no rows");

  std::vector<std::string> header;
  std::size_t first = 0;
  if (options.has_header) {
    header = rows.front();
    first = 1;
  }
  if (first >= rows.size()) throw Error(ErrorCode::EmptyInput, "CSV input has a header but no data rows");

  const std::size_t width = options.has_header ? header.size() : rows[first].size();
  for (std::size_t r = first; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_numbers[r]) + ": expected " +
                                             std::to_string(width) + " fields, found " +
                                             std::to_string(rows[r].size()));
    }
  }

  const auto label_col = find_column(options.label_column, header, options.has_header);
  const auto id_col = find_column(options.id_column, header, options.has_header);
  if (label_col && *label_col >= width) throw Error(ErrorCode::UsageError, "label column out of range");
  if (id_col && *id_col >= width) throw Error(ErrorCode::UsageError, "id column out of range");

  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < width; ++c) {
    if (c != label_col && c != id_col) feature_cols.push_back(c);
  }
  if (feature_cols.empty()) throw Error(ErrorCode::EmptyInput, "CSV input has no feature columns");

  const auto n = static_cast<Index>(rows.size() - first);
  Matrix values(static_cast<Index>(feature_cols.size()), n);
  Dataset data;
  if (label_col) data.labels.emplace();
  for (std::size_t r = first; r < rows.size(); ++r) {
    const auto sample = static_cast<Index>(r - first);
    for (std::size_t f = 0; f < feature_cols.size(); ++f) {
      const auto value = parse_number(rows[r][feature_cols[f]]);
      if (!value || !std::isfinite(*value)) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_numbers[r]) + ", column " +
                                               std::to_string(feature_cols[f] + 1) + ": '" +
                                               rows[r][feature_cols[f]] + "' is not a finite number");
      }
      values(static_cast<Index>(f), sample) = *value;
    }
    if (label_col) data.labels->push_back(rows[r][*label_col]);
    if (id_col) data.sample_ids.push_back(rows[r][*id_col]);
  }
  for (std::size_t f = 0; f < feature_cols.size(); ++f) {
    data.feature_names.push_back(options.has_header ? header[feature_cols[f]]
                                                    : "x" + std::to_string(feature_cols[f]));
  }
  if (label_col && options.has_header) data.label_name = header[*label_col];
  data.features = DataMatrix(std::move(values));
  return data;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path.string() + "'");
  return parse_csv(in, options);
}

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_matrix_csv(std::ostream& out, const Matrix& rows, const std::vector<std::string>& header,
                      const std::vector<std::string>& row_ids) {
  const bool with_ids = !row_ids.empty();
  if (!header.empty()) {
    if (with_ids) out << "id,";
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
  }
  for (Index r = 0; r < rows.rows(); ++r) {
    if (with_ids) out << row_ids[static_cast<std::size_t>(r)] << ',';
    for (Index c = 0; c < rows.cols(); ++c) out << (c ? "," : "") << format_double(rows(r, c));
    out << '\n';
  }
}

void write_csv(std::ostream& out, const Dataset& data) {
  const Matrix& x = data.features.values();
  const bool with_ids = !data.sample_ids.empty();
  const bool with_labels = data.labels.has_value();
  if (with_ids) out << "id,";
  for (std::size_t i = 0; i < data.feature_names.size(); ++i) out << (i ? "," : "") << data.feature_names[i];
  if (with_labels) out << ',' << data.label_name;
  out << '\n';
  for (Index s = 0; s < x.cols(); ++s) {
    if (with_ids) out << data.sample_ids[static_cast<std::size_t>(s)] << ',';
    for (Index f = 0; f < x.rows(); ++f) out << (f ? "," : "") << format_double(x(f, s));
    if (with_labels) out << ',' << (*data.labels)[static_cast<std::size_t>(s)];
    out << '\n';
  }
}

Standardization fit_standardization(const DataMatrix& x) {
  Standardization params;
  params.mean = x.values().rowwise().mean();
  const Matrix centered = x.values().colwise() - params.mean;
  params.scale = (centered.rowwise().squaredNorm() / static_cast<double>(x.samples())).cwiseSqrt();
  for (Index i = 0; i < params.scale.size(); ++i) {
    if (!(params.scale(i) > 0.0)) params.scale(i) = 1.0;
  }
  return params;
}

DataMatrix apply_standardization(const Standardization& params, const DataMatrix& x) {
  if (params.mean.size() != x.dims()) {
    throw Error(ErrorCode::InvalidDimension, "standardization has " + std::to_string(params.mean.size()) +
                                                 " features, data has " + std::to_string(x.dims()));
  }
  Matrix out = x.values().colwise() - params.mean;
  out = params.scale.cwiseInverse().asDiagonal() * out;
  return DataMatrix(std::move(out));
}

Matrix invert_standardization(const Standardization& params, const Matrix& x) {
  Matrix out = params.scale.asDiagonal() * x;
  return out.colwise() + params.mean;
}

Standardization standardize(Dataset& data) {
  auto params = fit_standardization(data.features);
  data.features = apply_standardization(params, data.features);
  return params;
}

std::vector<Index> shuffled_indices(Index n, std::uint64_t seed) {
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 engine(seed);
  // Fisher-Yates with rejection sampling; std::shuffle's draw sequence is
  // library specific.
  for (std::size_t i = order.size(); i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = engine.max() - engine.max() % bound;
    std::uint64_t draw = engine();
    while (draw >= limit) draw = engine();
    std::swap(order[i - 1], order[static_cast<std::size_t>(draw % bound)]);
  }
  return order;
}

Dataset subset(const Dataset& data, const std::vector<Index>& indices) {
  Dataset out;
  Matrix values(data.features.dims(), static_cast<Index>(indices.size()));
  if (data.labels) out.labels.emplace();
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const Index s = indices[i];
    values.col(static_cast<Index>(i)) = data.features.sample(s);
    if (data.labels) out.labels->push_back((*data.labels)[static_cast<std::size_t>(s)]);
    if (!data.sample_ids.empty()) out.sample_ids.push_back(data.sample_ids[static_cast<std::size_t>(s)]);
  }
  out.features = DataMatrix(std::move(values));
  out.feature_names = data.feature_names;
  out.label_name = data.label_name;
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& data, double test_fraction, std::uint64_t seed) {
  const Index n = data.samples();
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorCode::UsageError, "test fraction must lie in (0, 1)");
  }
  const auto n_test = static_cast<Index>(std::ceil(static_cast<double>(n) * test_fraction - 1e-9));
  if (n_test < 1 || n_test >= n) {
    throw Error(ErrorCode::DegenerateInput, "splitting " + std::to_string(n) + " samples with fraction " +
                                                format_double(test_fraction) + " leaves an empty side");
  }
  const auto order = shuffled_indices(n, seed);
  const std::vector<Index> test(order.begin(), order.begin() + n_test);
  const std::vector<Index> train(order.begin() + n_test, order.end());
  return {subset(data, train), subset(data, test)};
}

}  // namespace pcakit
