#pragma once
// CSV ingestion and preprocessing. Files hold one sample per row; the
// transpose into the column-per-sample DataMatrix happens here and nowhere
// else.

#include "pcakit/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pcakit {

struct CsvOptions {
  bool has_header = true;
  /// Column holding labels: a header name, or a zero-based index when the
  /// file has no header.
  std::optional<std::string> label_column;
  std::optional<std::string> id_column;
  char delimiter = ',';
};

struct Dataset {
  DataMatrix features;
  std::optional<std::vector<std::string>> labels;
  std::string label_name = "label";
  std::vector<std::string> feature_names;
  std::vector<std::string> sample_ids;

  Index samples() const { return features.samples(); }

  /// Labels as reals when every label parses as a number.
  std::optional<Vector> numeric_labels() const;
};

Dataset parse_csv(std::istream& in, const CsvOptions& options = {});
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Writes rows = samples, with 17 significant digits per value.
void write_csv(std::ostream& out, const Dataset& data);
void write_matrix_csv(std::ostream& out, const Matrix& rows, const std::vector<std::string>& header,
                      const std::vector<std::string>& row_ids = {});

std::string format_double(double value);

struct Standardization {
  Vector mean;
  Vector scale;  ///< population standard deviation, 1 for constant features
};

Standardization fit_standardization(const DataMatrix& x);
DataMatrix apply_standardization(const Standardization& params, const DataMatrix& x);
Matrix invert_standardization(const Standardization& params, const Matrix& x);

/// Standardizes in place and returns the parameters.
Standardization standardize(Dataset& data);

/// Seeded shuffle then split: ceil(n * test_fraction) test samples.
std::pair<Dataset, Dataset> split(const Dataset& data, double test_fraction, std::uint64_t seed);

/// The permutation used by split().
std::vector<Index> shuffled_indices(Index n, std::uint64_t seed);

Dataset subset(const Dataset& data, const std::vector<Index>& indices);

}  // namespace pcakit
