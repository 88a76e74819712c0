#include "logens/trainer.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "logens/errors.hpp"
#include "logens/format.hpp"
#include "logens/gradient.hpp"
#include "logens/random.hpp"

namespace logens {

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
    throw std::invalid_argument("learning_rate must be a finite non-negative number");
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (!(init_scale >= 0.0) || !std::isfinite(init_scale))
    throw std::invalid_argument("init_scale must be a finite non-negative number");
  if (cost_record_stride < 1) throw std::invalid_argument("cost_record_stride must be >= 1");
  if (early_stop && early_stop_patience < 1)
    throw std::invalid_argument("early_stop_patience must be >= 1");
}

EnsembleModel init_model(int n_layers, std::size_t feature_dim, std::uint64_t seed,
                         double init_scale) {
  if (!(init_scale >= 0.0) || !std::isfinite(init_scale))
    throw std::invalid_argument("init_scale must be a finite non-negative number");
  EnsembleModel model(n_layers, feature_dim);
  if (init_scale == 0.0) return model;
  Rng rng(seed);
  for (double& w : model.weights().flat()) w = init_scale * rng.normal();
  return model;
}

TrainResult train(const Dataset& data, const TrainConfig& config, int n_layers,
                  const IterationObserver& observer) {
  config.validate();
  data.validate();

  TrainResult result{init_model(n_layers, data.feature_dim(), config.seed, config.init_scale), {}, 0};
  EnsembleModel& model = result.model;

  double current = cost(model, data, config.execution);
  result.cost_history.push_back({0, current});

  int quiet_steps = 0;
  for (int it = 1; it <= config.iterations; ++it) {
    const Matrix grad = batch_gradient(model, data, config.execution);
    auto w = model.weights().flat();
    const auto g = grad.flat();
    for (std::size_t e = 0; e < w.size(); ++e) {
      w[e] -= config.learning_rate * g[e];
      if (!std::isfinite(w[e]))
        throw NumericFailure("weights became non-finite at iteration " + std::to_string(it));
    }

    double next;
    try {
      next = cost(model, data, config.execution);
    } catch (const std::invalid_argument& e) {
      throw NumericFailure("cost evaluation failed at iteration " + std::to_string(it) + ": " +
                           e.what());
    }
    if (!std::isfinite(next))
      throw NumericFailure("cost became non-finite at iteration " + std::to_string(it));

    result.converged_iterations = it;
    if (observer) observer(it, model);

    quiet_steps = std::abs(next - current) < config.early_stop_tolerance ? quiet_steps + 1 : 0;
    const bool stopping = config.early_stop && quiet_steps >= config.early_stop_patience;
    current = next;
    if (it % config.cost_record_stride == 0 || it == config.iterations || stopping)
      result.cost_history.push_back({it, current});
    if (stopping) break;
  }
  return result;
}

void write_cost_history_csv(const std::vector<CostRecord>& history,
                            const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "iteration,cost\n";
  for (const auto& rec : history) out << rec.iteration << ',' << format_real(rec.cost) << '\n';
}

std::vector<CostRecord> read_cost_history_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "iteration,cost")
    throw std::invalid_argument(path.string() + ": expected header `iteration,cost`");
  std::vector<CostRecord> history;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument(path.string() + ": bad row " + line);
    history.push_back({std::stoi(line.substr(0, comma)), parse_real(line.substr(comma + 1))});
  }
  return history;
}

}  // namespace logens
