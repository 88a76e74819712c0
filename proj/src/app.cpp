#include "logens/app.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "logens/errors.hpp"
#include "logens/kernels.hpp"
#include "logens/metrics.hpp"

namespace logens {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
void read_opt(const json& obj, const char* key, T& into) {
  if (obj.contains(key)) into = obj.at(key).get<T>();
}

std::uint64_t read_seed(const json& obj, const std::string& where) {
  if (!obj.contains("seed"))
    throw ConfigError("missing mandatory seed: " + where + ".seed");
  return obj.at("seed").get<std::uint64_t>();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

void RunConfig::validate() const {
  if (data.empty()) throw ConfigError("config: `data` path is required");
  if (layers.empty()) throw ConfigError("config: `layers` must list at least one depth");
  for (int n : layers)
    if (n < 1 || n > kMaxLayers)
      throw ConfigError("config: layer value " + std::to_string(n) + " out of range");
  if (!(pipeline.train_ratio > 0.0 && pipeline.train_ratio < 1.0))
    throw ConfigError("config: split.train_ratio must lie in (0, 1)");
  if (!(pipeline.augment.fraction >= 0.0))
    throw ConfigError("config: augment.fraction must be non-negative");
  try {
    train.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: train: ") + e.what());
  }
}

RunConfig run_config_from_json(const std::string& text, const fs::path& base_dir) {
  RunConfig cfg;
  try {
    const json doc = json::parse(text);
    check_keys(doc,
               {"data", "target", "exclude_columns", "label_threshold", "augment", "split", "layers",
                "train", "out"},
               "config");
    if (!doc.contains("data")) throw ConfigError("config: `data` path is required");
    cfg.data = doc.at("data").get<std::string>();
    read_opt(doc, "target", cfg.target);
    read_opt(doc, "exclude_columns", cfg.exclude_columns);
    read_opt(doc, "label_threshold", cfg.pipeline.label_threshold);
    read_opt(doc, "layers", cfg.layers);
    if (doc.contains("out")) cfg.out = doc.at("out").get<std::string>();

    const json augment = doc.value("augment", json::object());
    check_keys(augment, {"fraction", "seed", "mean_shift", "before_standardize"}, "augment");
    read_opt(augment, "fraction", cfg.pipeline.augment.fraction);
    read_opt(augment, "mean_shift", cfg.pipeline.augment.mean_shift);
    read_opt(augment, "before_standardize", cfg.pipeline.augment_before_standardize);
    cfg.pipeline.augment.seed = read_seed(augment, "augment");

    const json split = doc.value("split", json::object());
    check_keys(split, {"train_ratio", "seed"}, "split");
    read_opt(split, "train_ratio", cfg.pipeline.train_ratio);
    cfg.pipeline.split_seed = read_seed(split, "split");

    const json train = doc.value("train", json::object());
    check_keys(train,
               {"learning_rate", "iterations", "init_scale", "seed", "cost_record_stride",
                "early_stop", "early_stop_tolerance", "early_stop_patience"},
               "train");
    read_opt(train, "learning_rate", cfg.train.learning_rate);
    read_opt(train, "iterations", cfg.train.iterations);
    read_opt(train, "init_scale", cfg.train.init_scale);
    read_opt(train, "cost_record_stride", cfg.train.cost_record_stride);
    read_opt(train, "early_stop", cfg.train.early_stop);
    read_opt(train, "early_stop_tolerance", cfg.train.early_stop_tolerance);
    read_opt(train, "early_stop_patience", cfg.train.early_stop_patience);
    cfg.train.seed = read_seed(train, "train");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (cfg.data.is_relative()) cfg.data = base_dir / cfg.data;
  if (cfg.out.is_relative()) cfg.out = base_dir / cfg.out;
  cfg.data = cfg.data.lexically_normal();
  cfg.out = cfg.out.lexically_normal();
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  return run_config_from_json(read_text(path), fs::absolute(path).parent_path());
}

std::string run_config_to_json(const RunConfig& cfg) {
  // The output directory is left out: it is where this document lives, and
  // runs into different directories should produce identical files.
  json doc;
  doc["data"] = cfg.data.string();
  doc["target"] = cfg.target;
  doc["exclude_columns"] = cfg.exclude_columns;
  doc["label_threshold"] = cfg.pipeline.label_threshold;
  doc["augment"] = {{"fraction", cfg.pipeline.augment.fraction},
                    {"seed", cfg.pipeline.augment.seed},
                    {"mean_shift", cfg.pipeline.augment.mean_shift},
                    {"before_standardize", cfg.pipeline.augment_before_standardize}};
  doc["split"] = {{"train_ratio", cfg.pipeline.train_ratio}, {"seed", cfg.pipeline.split_seed}};
  doc["layers"] = cfg.layers;
  doc["train"] = {{"learning_rate", cfg.train.learning_rate},
                  {"iterations", cfg.train.iterations},
                  {"init_scale", cfg.train.init_scale},
                  {"seed", cfg.train.seed},
                  {"cost_record_stride", cfg.train.cost_record_stride},
                  {"early_stop", cfg.train.early_stop},
                  {"early_stop_tolerance", cfg.train.early_stop_tolerance},
                  {"early_stop_patience", cfg.train.early_stop_patience}};
  return doc.dump(2) + "\n";
}

PrepareSummary cmd_prepare(const RunConfig& cfg) {
  cfg.validate();
  LabeledTable raw;
  try {
    raw = load_csv(cfg.data, cfg.target, cfg.exclude_columns);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("prepare/load: ") + e.what());
  }
  PreparedData prepared;
  try {
    prepared = prepare_dataset(raw, cfg.pipeline);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("prepare/pipeline: ") + e.what());
  }

  fs::create_directories(cfg.out);
  write_text(cfg.out / "config.json", run_config_to_json(cfg));
  write_csv(prepared.augmented, cfg.out / "augmented.csv");
  write_dataset_csv(prepared.split.train, cfg.out / "train.csv");
  write_dataset_csv(prepared.split.test, cfg.out / "test.csv");
  write_text(cfg.out / "split.json",
             json{{"train_rows", prepared.split.train_rows}, {"test_rows", prepared.split.test_rows}}
                     .dump() +
                 "\n");
  write_text(cfg.out / "standardization.json",
             standardization_to_json(prepared.params, prepared.standardized.feature_names));

  PrepareSummary summary{raw.size(), prepared.standardized.size(), prepared.split.train.size(),
                         prepared.split.test.size(), prepared.balance};
  write_text(cfg.out / "balance.json",
             json{{"negatives", summary.balance.negatives},
                  {"positives", summary.balance.positives},
                  {"negative_share", summary.balance.negative_share},
                  {"positive_share", summary.balance.positive_share}}
                     .dump(2) +
                 "\n");
  write_text(cfg.out / "summary.json",
             json{{"original_rows", summary.original_rows},
                  {"augmented_rows", summary.augmented_rows},
                  {"train_rows", summary.train_rows},
                  {"test_rows", summary.test_rows}}
                     .dump(2) +
                 "\n");
  return summary;
}

std::vector<TrainResult> cmd_train(const RunConfig& cfg) {
  cfg.validate();
  const Dataset train_set = read_dataset_csv(cfg.out / "train.csv");
  write_text(cfg.out / "config.json", run_config_to_json(cfg));
  std::vector<TrainResult> results;
  for (int n : cfg.layers) {
    TrainResult result = train(train_set, cfg.train, n);
    const std::string tag = "n" + std::to_string(n);
    save_model(result.model, cfg.out / ("model_" + tag + ".json"));
    write_cost_history_csv(result.cost_history, cfg.out / ("cost_" + tag + ".csv"));
    results.push_back(std::move(result));
  }
  return results;
}

std::string evaluation_to_json(const EvaluationReport& r) {
  json doc;
  doc["train_accuracy"] = r.train_accuracy;
  doc["test_accuracy"] = r.test_accuracy;
  doc["test_auc"] = r.test_auc;
  doc["test_recall"] = optional_number(r.test_recall);
  doc["test_precision"] = optional_number(r.test_precision);
  return doc.dump(2) + "\n";
}

EvaluationReport cmd_evaluate(const RunConfig& cfg, const fs::path& model_path,
                              const fs::path& test_path, const std::string& tag) {
  const EnsembleModel model = load_model(model_path);
  const Dataset train = read_dataset_csv(cfg.out / "train.csv");
  const Dataset test = read_dataset_csv(test_path);
  for (const Dataset* d : {&train, &test})
    if (d->feature_dim() != model.feature_dim())
      throw ConfigError("model " + model_path.string() + " expects " +
                        std::to_string(model.feature_dim()) + " features, data has " +
                        std::to_string(d->feature_dim()));

  const auto train_scores = class1_scores(model, train.features);
  const auto test_scores = class1_scores(model, test.features);
  const MetricsReport train_metrics = confusion_and_rates(classify(train_scores), train.labels);
  const MetricsReport test_metrics = confusion_and_rates(classify(test_scores), test.labels);
  const RocResult roc = roc_auc(test_scores, test.labels);

  EvaluationReport report{train_metrics.accuracy, test_metrics.accuracy, roc.auc,
                          test_metrics.recall, test_metrics.precision};
  fs::create_directories(cfg.out);
  write_text(cfg.out / ("metrics_" + tag + ".json"), evaluation_to_json(report));
  write_roc_csv(roc.curve, cfg.out / ("roc_" + tag + ".csv"));
  return report;
}

GradcheckReport cmd_gradcheck(const GradcheckOptions& options, std::ostream& out) {
  const GradcheckReport report = run_gradcheck(options);
  out << "gradcheck n_layers=" << options.n_layers << " dim=" << options.feature_dim
      << " points=" << options.points << " seed=" << options.seed << '\n'
      << std::scientific << std::setprecision(3)
      << "  gradient max rel error    " << report.gradient_rel_error << " (tol "
      << options.gradient_tolerance << ") " << (report.gradient_ok ? "ok" : "FAIL") << '\n'
      << "  probability max abs error " << report.probability_abs_error << " (tol "
      << options.probability_tolerance << ") " << (report.probability_ok ? "ok" : "FAIL") << '\n'
      << std::defaultfloat;
  return report;
}

namespace {

std::vector<int> parse_layers(const std::string& text) {
  std::vector<int> layers;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      layers.push_back(n);
    } catch (const std::exception&) {
      throw ConfigError("--layers: '" + item + "' is not an integer");
    }
  }
  if (layers.empty()) throw ConfigError("--layers must not be empty");
  return layers;
}

struct Overrides {
  std::string config;
  std::string layers;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<double> threshold;
  std::optional<double> lr;
  std::optional<int> iters;
};

void add_run_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Run config JSON")->required();
  cmd->add_option("--layers", o.layers, "Comma-separated layer counts, e.g. 1,2,3,4");
  cmd->add_option("--seed", o.seed, "Override every seed (augment, split, init)");
  cmd->add_option("--out", o.out, "Run output directory");
  cmd->add_option("--threshold", o.threshold, "Label threshold: quality >= t is class 1");
  cmd->add_option("--lr", o.lr, "Learning rate");
  cmd->add_option("--iters", o.iters, "Gradient descent iterations");
}

RunConfig resolve(const Overrides& o) {
  RunConfig cfg = load_run_config(o.config);
  if (!o.layers.empty()) cfg.layers = parse_layers(o.layers);
  if (o.seed) {
    cfg.pipeline.augment.seed = *o.seed;
    cfg.pipeline.split_seed = *o.seed;
    cfg.train.seed = *o.seed;
  }
  if (!o.out.empty()) cfg.out = fs::absolute(o.out).lexically_normal();
  if (o.threshold) cfg.pipeline.label_threshold = *o.threshold;
  if (o.lr) cfg.train.learning_rate = *o.lr;
  if (o.iters) cfg.train.iterations = *o.iters;
  cfg.validate();
  return cfg;
}

std::string show(const std::optional<double>& v) {
  if (!v) return "undefined";
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << *v;
  return s.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamic logistic ensembles: data preparation, training, evaluation and gradient checks",
               "logens"};
  app.require_subcommand(1);

  Overrides prep_o, train_o, eval_o;
  auto* prepare = app.add_subcommand("prepare", "Encode, augment, standardize and split a CSV");
  add_run_options(prepare, prep_o);
  auto* train = app.add_subcommand("train", "Train one ensemble per layer count");
  add_run_options(train, train_o);
  auto* evaluate = app.add_subcommand("evaluate", "Write metrics JSON and ROC CSV per model");
  add_run_options(evaluate, eval_o);
  std::string model_file, test_file;
  evaluate->add_option("--model", model_file, "Evaluate this model file only");
  evaluate->add_option("--test", test_file, "Test split CSV (default <out>/test.csv)");

  auto* gradcheck = app.add_subcommand("gradcheck", "Check analytical gradients and probabilities");
  GradcheckOptions gc;
  std::string gc_layers = "1,2,3,4,5";
  gradcheck->add_option("--layers", gc_layers, "Comma-separated layer counts")->capture_default_str();
  gradcheck->add_option("--seed", gc.seed, "Random model/dataset seed")->capture_default_str();
  gradcheck->add_option("--dim", gc.feature_dim, "Feature dimension")->capture_default_str();
  gradcheck->add_option("--points", gc.points, "Dataset size")->capture_default_str();
  gradcheck->add_option("--step", gc.step, "Central-difference step")->capture_default_str();
  gradcheck->add_flag("--corrupt-gradient", gc.corrupt_gradient)->group("");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "logens: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (*prepare) {
      const RunConfig cfg = resolve(prep_o);
      const PrepareSummary s = cmd_prepare(cfg);
      out << "prepared " << cfg.out.string() << "\n  original rows  " << s.original_rows
          << "\n  augmented rows " << s.augmented_rows << "\n  train / test   " << s.train_rows
          << " / " << s.test_rows << "\n  class 0 / 1    " << s.balance.negatives << " / "
          << s.balance.positives << '\n';
    } else if (*train) {
      const RunConfig cfg = resolve(train_o);
      const auto results = cmd_train(cfg);
      for (std::size_t i = 0; i < results.size(); ++i)
        out << "n=" << cfg.layers[i] << "  iterations " << results[i].converged_iterations
            << "  final cost " << std::setprecision(10) << results[i].cost_history.back().cost
            << std::setprecision(6) << '\n';
    } else if (*evaluate) {
      const RunConfig cfg = resolve(eval_o);
      const fs::path test = test_file.empty() ? cfg.out / "test.csv" : fs::path(test_file);
      std::vector<std::pair<std::string, fs::path>> jobs;
      if (!model_file.empty()) {
        jobs.emplace_back(fs::path(model_file).stem().string(), model_file);
      } else {
        for (int n : cfg.layers) {
          const std::string tag = "n" + std::to_string(n);
          jobs.emplace_back(tag, cfg.out / ("model_" + tag + ".json"));
        }
      }
      out << std::left << std::setw(10) << "model" << std::setw(11) << "train_acc"
          << std::setw(10) << "test_acc" << std::setw(10) << "test_auc" << std::setw(11)
          << "recall" << "precision\n";
      for (const auto& [tag, path] : jobs) {
        const EvaluationReport r = cmd_evaluate(cfg, path, test, tag);
        out << std::setw(10) << tag << std::setw(11) << show(r.train_accuracy) << std::setw(10)
            << show(r.test_accuracy) << std::setw(10) << show(r.test_auc) << std::setw(11)
            << show(r.test_recall) << show(r.test_precision) << '\n';
      }
    } else if (*gradcheck) {
      bool gradient_ok = true, probability_ok = true;
      for (int n : parse_layers(gc_layers)) {
        gc.n_layers = n;
        const GradcheckReport r = cmd_gradcheck(gc, out);
        gradient_ok = gradient_ok && r.gradient_ok;
        probability_ok = probability_ok && r.probability_ok;
      }
      if (!probability_ok) return kExitProbabilityBreach;
      if (!gradient_ok) return kExitGradientBreach;
    }
  } catch (const NumericFailure& e) {
    err << "logens: numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const ConfigError& e) {
    err << "logens: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "logens: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    err << "logens: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace logens
