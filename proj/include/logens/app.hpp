#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "logens/data.hpp"
#include "logens/trainer.hpp"
#include "logens/verify.hpp"

namespace logens {

// Process exit codes of the `logens` tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitGradientBreach = 4;
inline constexpr int kExitProbabilityBreach = 5;

/// Everything one reproducible run needs. Loaded from a JSON config file;
/// the three seeds are mandatory there.
struct RunConfig {
  std::filesystem::path data;
  std::string target = "quality";
  std::vector<std::string> exclude_columns;
  PipelineOptions pipeline;
  std::vector<int> layers{1, 2, 3, 4};
  TrainConfig train;
  std::filesystem::path out = "run";

  void validate() const;
};

/// Relative `data`/`out` paths are resolved against `base_dir`.
RunConfig run_config_from_json(const std::string& text, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);
std::string run_config_to_json(const RunConfig& config);

struct PrepareSummary {
  std::size_t original_rows = 0;
  std::size_t augmented_rows = 0;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  ClassBalance balance;
};

/// Writes config.json, augmented.csv, train.csv, test.csv, split.json,
/// standardization.json, balance.json and summary.json into config.out.
PrepareSummary cmd_prepare(const RunConfig& config);

/// For every layer count k: model_n<k>.json and cost_n<k>.csv. Reads train.csv.
std::vector<TrainResult> cmd_train(const RunConfig& config);

/// Test-set metrics in the run's JSON report shape.
struct EvaluationReport {
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double test_auc = 0.0;
  std::optional<double> test_recall;
  std::optional<double> test_precision;
};

std::string evaluation_to_json(const EvaluationReport& report);

/// Evaluates one model file against train.csv and a test split, writing
/// metrics_<tag>.json and roc_<tag>.csv into config.out.
EvaluationReport cmd_evaluate(const RunConfig& config, const std::filesystem::path& model_path,
                              const std::filesystem::path& test_path, const std::string& tag);

GradcheckReport cmd_gradcheck(const GradcheckOptions& options, std::ostream& out);

/// Full command-line entry point; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace logens
