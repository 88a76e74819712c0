#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "logens/dataset.hpp"
#include "logens/matrix.hpp"

namespace logens {

/// Numeric CSV table split into feature columns and one target column.
/// Column order of the source file is preserved on write.
struct LabeledTable {
  std::vector<std::string> columns;  ///< every column, in file order
  std::size_t target_index = 0;      ///< position of the target in `columns`
  Matrix features;                   ///< all non-target columns, in file order
  std::vector<double> target;
  char delimiter = ',';

  std::size_t size() const { return target.size(); }
  std::vector<std::string> feature_names() const;
  const std::string& target_name() const { return columns[target_index]; }
};

/// Reads a headed CSV whose cells are all numeric. The delimiter (comma or
/// semicolon) is detected from the header; quoted header names are unquoted.
/// Columns named in `exclude` are dropped. Throws ConfigError for unreadable
/// or malformed files and unknown target/excluded column names.
LabeledTable load_csv(const std::filesystem::path& path, const std::string& target_column,
                      std::span<const std::string> exclude = {});

/// Writes the table back with the same header and delimiter.
void write_csv(const LabeledTable& table, const std::filesystem::path& path);

/// 1 iff quality >= threshold. Throws std::invalid_argument if every label
/// comes out the same.
std::vector<int> encode_labels(std::span<const double> quality, double threshold);

struct StandardizationParams {
  std::vector<double> means;
  std::vector<double> stds;  ///< population standard deviations, all > 0

  bool operator==(const StandardizationParams&) const = default;
};

/// Column means and population standard deviations. Zero-variance columns
/// are rejected with std::invalid_argument.
StandardizationParams fit_standardization(const Matrix& features);
Matrix apply_standardization(const Matrix& features, const StandardizationParams& params);

struct Standardized {
  Matrix features;
  StandardizationParams params;
};
Standardized standardize(const Matrix& features);

std::string standardization_to_json(const StandardizationParams& params,
                                    std::span<const std::string> names);
StandardizationParams standardization_from_json(const std::string& text);

struct AugmentOptions {
  double fraction = 0.1;
  std::uint64_t seed = 0;
  /// When false the noise is zero-mean (spread only).
  bool mean_shift = true;
};

/// Returns 2K rows: the K originals followed by one noisy copy of each, in
/// order. Copy of row k adds Normal(fraction * mu_f, (fraction * sigma_f)^2)
/// to feature f, with mu_f, sigma_f the population moments of the input column.
Matrix augment_gaussian(const Matrix& raw, const AugmentOptions& options);
/// Same, carrying labels along (each copy keeps its source row's label).
Dataset augment_gaussian(const Dataset& raw, const AugmentOptions& options);

struct Split {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
};

/// Seeded Fisher-Yates shuffle then a prefix of floor(train_ratio * K) rows
/// for training; the rest is the test set.
Split split(const Dataset& data, double train_ratio, std::uint64_t seed);

/// Rows of `data` selected by index, in the given order.
Dataset select_rows(const Dataset& data, std::span<const std::size_t> rows);

struct ClassBalance {
  std::size_t negatives = 0;
  std::size_t positives = 0;
  double negative_share = 0.0;
  double positive_share = 0.0;
};
ClassBalance class_balance_report(std::span<const int> labels);

struct PipelineOptions {
  double label_threshold = 6.0;
  AugmentOptions augment;
  /// Augment raw features (true) or already standardized ones (false).
  bool augment_before_standardize = true;
  double train_ratio = 0.8;
  std::uint64_t split_seed = 0;
};

struct PreparedData {
  LabeledTable augmented;  ///< augmented table in the input schema
  StandardizationParams params;
  Dataset standardized;    ///< every augmented row, standardized and labelled
  Split split;
  ClassBalance balance;
};

/// encode -> augment -> standardize (fit on all augmented rows) -> split.
PreparedData prepare_dataset(const LabeledTable& raw, const PipelineOptions& options);

/// Standardized dataset file: the feature columns plus a trailing `label`.
void write_dataset_csv(const Dataset& data, const std::filesystem::path& path);
Dataset read_dataset_csv(const std::filesystem::path& path);

}  // namespace logens
