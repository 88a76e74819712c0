#include "logens/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "logens/errors.hpp"
#include "logens/format.hpp"
#include "logens/random.hpp"

namespace logens {

void Dataset::validate() const {
  if (labels.empty()) throw std::invalid_argument("dataset is empty");
  if (features.rows() != labels.size())
    throw std::invalid_argument("dataset has " + std::to_string(features.rows()) +
                                " feature rows but " + std::to_string(labels.size()) + " labels");
  if (features.cols() == 0) throw std::invalid_argument("dataset has no feature columns");
  for (int y : labels)
    if (y != 0 && y != 1) throw std::invalid_argument("dataset labels must be 0 or 1");
  for (double v : features.flat())
    if (!std::isfinite(v)) throw std::invalid_argument("dataset contains a non-finite feature");
}

std::vector<std::string> LabeledTable::feature_names() const {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (c != target_index) names.push_back(columns[c]);
  return names;
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string unquote(std::string s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, delim)) fields.push_back(field);
  if (!line.empty() && line.back() == delim) fields.emplace_back();
  return fields;
}

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

}  // namespace

LabeledTable load_csv(const std::filesystem::path& path, const std::string& target_column,
                      std::span<const std::string> exclude) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open data file " + path.string());

  std::string header;
  if (!std::getline(in, header) || trim(header).empty())
    throw ConfigError(path.string() + ": file is empty");
  const auto semis = std::count(header.begin(), header.end(), ';');
  const auto commas = std::count(header.begin(), header.end(), ',');
  const char delim = semis > commas ? ';' : ',';

  std::vector<std::string> names;
  for (auto& f : split_line(header, delim)) names.push_back(unquote(f));

  const auto target_it = std::find(names.begin(), names.end(), target_column);
  if (target_it == names.end())
    throw ConfigError("target column '" + target_column + "' not found; available columns: " +
                      join(names));
  for (const auto& ex : exclude) {
    if (ex == target_column) throw ConfigError("cannot exclude the target column");
    if (std::find(names.begin(), names.end(), ex) == names.end())
      throw ConfigError("excluded column '" + ex + "' not found; available columns: " +
                        join(names));
  }

  std::vector<bool> keep(names.size());
  for (std::size_t c = 0; c < names.size(); ++c)
    keep[c] = std::find(exclude.begin(), exclude.end(), names[c]) == exclude.end();

  LabeledTable table;
  table.delimiter = delim;
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (!keep[c]) continue;
    if (names[c] == target_column) table.target_index = table.columns.size();
    table.columns.push_back(names[c]);
  }

  std::vector<double> values;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_line(line, delim);
    if (fields.size() != names.size())
      throw ConfigError(path.string() + ": line " + std::to_string(line_no) + " has " +
                        std::to_string(fields.size()) + " fields, header has " +
                        std::to_string(names.size()));
    for (std::size_t c = 0; c < names.size(); ++c) {
      if (!keep[c]) continue;
      double v;
      try {
        v = parse_real(unquote(fields[c]));
      } catch (const std::invalid_argument&) {
        throw ConfigError(path.string() + ": non-numeric cell '" + trim(fields[c]) + "' at line " +
                          std::to_string(line_no) + ", column '" + names[c] + "'");
      }
      if (!std::isfinite(v))
        throw ConfigError(path.string() + ": non-finite cell at line " + std::to_string(line_no) +
                          ", column '" + names[c] + "'");
      values.push_back(v);
    }
  }

  const std::size_t width = table.columns.size();
  const std::size_t rows = values.size() / width;
  if (rows == 0) throw ConfigError(path.string() + ": no data rows after the header");
  if (width < 2) throw ConfigError(path.string() + ": no feature columns besides the target");

  table.features = Matrix(rows, width - 1);
  table.target.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t out = 0;
    for (std::size_t c = 0; c < width; ++c) {
      const double v = values[r * width + c];
      if (c == table.target_index)
        table.target[r] = v;
      else
        table.features(r, out++) = v;
    }
  }
  return table;
}

void write_csv(const LabeledTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out << (c ? std::string(1, table.delimiter) : "") << '"' << table.columns[c] << '"';
  out << '\n';
  for (std::size_t r = 0; r < table.size(); ++r) {
    std::size_t f = 0;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out << table.delimiter;
      out << format_real(c == table.target_index ? table.target[r] : table.features(r, f++));
    }
    out << '\n';
  }
}

std::vector<int> encode_labels(std::span<const double> quality, double threshold) {
  std::vector<int> labels(quality.size());
  std::size_t positives = 0;
  for (std::size_t k = 0; k < quality.size(); ++k) {
    labels[k] = quality[k] >= threshold ? 1 : 0;
    positives += static_cast<std::size_t>(labels[k]);
  }
  if (positives == 0 || positives == labels.size()) {
    std::ostringstream msg;
    msg << "label threshold " << threshold << " puts every row in class "
        << (positives == 0 ? 0 : 1) << "; choose a threshold inside the observed range";
    throw std::invalid_argument(msg.str());
  }
  return labels;
}

StandardizationParams fit_standardization(const Matrix& features) {
  const std::size_t rows = features.rows();
  const std::size_t cols = features.cols();
  if (rows == 0) throw std::invalid_argument("cannot standardize an empty matrix");
  StandardizationParams params{std::vector<double>(cols, 0.0), std::vector<double>(cols, 0.0)};
  for (std::size_t c = 0; c < cols; ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < rows; ++r) sum += features(r, c);
    const double mean = sum / static_cast<double>(rows);
    double sq = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      const double d = features(r, c) - mean;
      sq += d * d;
    }
    const double sd = std::sqrt(sq / static_cast<double>(rows));
    if (!(sd > 0.0)) throw std::invalid_argument("column " + std::to_string(c) + " has zero variance");
    params.means[c] = mean;
    params.stds[c] = sd;
  }
  return params;
}

Matrix apply_standardization(const Matrix& features, const StandardizationParams& params) {
  if (params.means.size() != features.cols() || params.stds.size() != features.cols())
    throw std::invalid_argument("standardization parameters do not match the feature count");
  Matrix out(features.rows(), features.cols());
  for (std::size_t r = 0; r < features.rows(); ++r)
    for (std::size_t c = 0; c < features.cols(); ++c)
      out(r, c) = (features(r, c) - params.means[c]) / params.stds[c];
  return out;
}

Standardized standardize(const Matrix& features) {
  auto params = fit_standardization(features);
  auto scaled = apply_standardization(features, params);
  return {std::move(scaled), std::move(params)};
}

std::string standardization_to_json(const StandardizationParams& params,
                                    std::span<const std::string> names) {
  nlohmann::json doc;
  doc["features"] = std::vector<std::string>(names.begin(), names.end());
  doc["means"] = params.means;
  doc["stds"] = params.stds;
  return doc.dump(2) + "\n";
}

StandardizationParams standardization_from_json(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    StandardizationParams params{doc.at("means").get<std::vector<double>>(),
                                 doc.at("stds").get<std::vector<double>>()};
    if (params.means.size() != params.stds.size())
      throw std::invalid_argument("standardization JSON: means/stds length mismatch");
    for (double s : params.stds)
      if (!(s > 0.0)) throw std::invalid_argument("standardization JSON: stds must be positive");
    return params;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("standardization JSON: ") + e.what());
  }
}

Matrix augment_gaussian(const Matrix& raw, const AugmentOptions& options) {
  if (!(options.fraction >= 0.0) || !std::isfinite(options.fraction))
    throw std::invalid_argument("augmentation fraction must be a finite non-negative number");
  const std::size_t rows = raw.rows();
  const std::size_t cols = raw.cols();
  if (rows == 0) throw std::invalid_argument("cannot augment an empty matrix");

  std::vector<double> shift(cols), spread(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < rows; ++r) sum += raw(r, c);
    const double mean = sum / static_cast<double>(rows);
    double sq = 0.0;
    for (std::size_t r = 0; r < rows; ++r) sq += (raw(r, c) - mean) * (raw(r, c) - mean);
    shift[c] = options.mean_shift ? options.fraction * mean : 0.0;
    spread[c] = options.fraction * std::sqrt(sq / static_cast<double>(rows));
  }

  Matrix out(2 * rows, cols);
  std::copy(raw.flat().begin(), raw.flat().end(), out.flat().begin());
  Rng rng(options.seed);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      out(rows + r, c) = raw(r, c) + rng.normal(shift[c], spread[c]);
  return out;
}

Dataset augment_gaussian(const Dataset& raw, const AugmentOptions& options) {
  Dataset out;
  out.features = augment_gaussian(raw.features, options);
  out.labels = raw.labels;
  out.labels.insert(out.labels.end(), raw.labels.begin(), raw.labels.end());
  out.feature_names = raw.feature_names;
  return out;
}

Dataset select_rows(const Dataset& data, std::span<const std::size_t> rows) {
  Dataset out;
  out.features = Matrix(rows.size(), data.feature_dim());
  out.labels.resize(rows.size());
  out.feature_names = data.feature_names;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= data.size()) throw std::out_of_range("row index " + std::to_string(rows[i]));
    const auto src = data.x(rows[i]);
    std::copy(src.begin(), src.end(), out.features.row(i).begin());
    out.labels[i] = data.labels[rows[i]];
  }
  return out;
}

Split split(const Dataset& data, double train_ratio, std::uint64_t seed) {
  if (!(train_ratio > 0.0 && train_ratio < 1.0))
    throw std::invalid_argument("train_ratio must lie strictly between 0 and 1");
  const std::size_t total = data.size();
  const auto n_train = static_cast<std::size_t>(std::floor(train_ratio * static_cast<double>(total)));
  if (n_train == 0 || n_train == total)
    throw std::invalid_argument("split of " + std::to_string(total) +
                                " rows leaves one side empty");

  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = total - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);

  Split out;
  out.train_rows.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.test_rows.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  out.train = select_rows(data, out.train_rows);
  out.test = select_rows(data, out.test_rows);
  return out;
}

ClassBalance class_balance_report(std::span<const int> labels) {
  ClassBalance report;
  for (int y : labels) (y == 1 ? report.positives : report.negatives)++;
  if (!labels.empty()) {
    const auto total = static_cast<double>(labels.size());
    report.negative_share = static_cast<double>(report.negatives) / total;
    report.positive_share = static_cast<double>(report.positives) / total;
  }
  return report;
}

PreparedData prepare_dataset(const LabeledTable& raw, const PipelineOptions& options) {
  const auto labels = encode_labels(raw.target, options.label_threshold);

  PreparedData out;
  out.augmented = raw;
  if (options.augment_before_standardize) {
    out.augmented.features = augment_gaussian(raw.features, options.augment);
    out.params = fit_standardization(out.augmented.features);
    out.standardized.features = apply_standardization(out.augmented.features, out.params);
  } else {
    out.params = fit_standardization(raw.features);
    out.augmented.features =
        augment_gaussian(apply_standardization(raw.features, out.params), options.augment);
    out.standardized.features = out.augmented.features;
  }
  out.augmented.target = raw.target;
  out.augmented.target.insert(out.augmented.target.end(), raw.target.begin(), raw.target.end());

  out.standardized.labels = labels;
  out.standardized.labels.insert(out.standardized.labels.end(), labels.begin(), labels.end());
  out.standardized.feature_names = raw.feature_names();
  out.standardized.validate();

  out.split = split(out.standardized, options.train_ratio, options.split_seed);
  out.balance = class_balance_report(out.standardized.labels);
  return out;
}

void write_dataset_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  for (std::size_t c = 0; c < data.feature_dim(); ++c)
    out << (c < data.feature_names.size() ? data.feature_names[c] : "x" + std::to_string(c + 1))
        << ',';
  out << "label\n";
  for (std::size_t k = 0; k < data.size(); ++k) {
    for (double v : data.x(k)) out << format_real(v) << ',';
    out << data.y(k) << '\n';
  }
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  const LabeledTable table = load_csv(path, "label");
  Dataset data;
  data.features = table.features;
  data.feature_names = table.feature_names();
  data.labels.reserve(table.size());
  for (double v : table.target) {
    if (v != 0.0 && v != 1.0) throw ConfigError(path.string() + ": label column must be 0/1");
    data.labels.push_back(static_cast<int>(v));
  }
  return data;
}

}  // namespace logens
