#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "logens/dataset.hpp"
#include "logens/kernels.hpp"
#include "logens/model.hpp"

namespace logens {

struct TrainConfig {
  /// Gradients are summed over the batch, so the stable step shrinks with K.
  double learning_rate = 5e-4;
  int iterations = 5000;
  /// Standard deviation of the Gaussian weight initialization.
  double init_scale = 0.01;
  std::uint64_t seed = 0;
  int cost_record_stride = 1;
  /// Stop once |cost change| stays below early_stop_tolerance for
  /// early_stop_patience consecutive iterations.
  bool early_stop = true;
  double early_stop_tolerance = 1e-9;
  int early_stop_patience = 50;
  Execution execution = Execution::parallel;

  void validate() const;
};

struct CostRecord {
  int iteration;
  double cost;

  bool operator==(const CostRecord&) const = default;
};

struct TrainResult {
  EnsembleModel model;
  /// Cost after `iteration` updates; iteration 0 is the initial model.
  std::vector<CostRecord> cost_history;
  /// Number of gradient steps actually taken.
  int converged_iterations = 0;
};

/// Weights i.i.d. Normal(0, init_scale^2) drawn from logens::Rng(seed) in
/// row-major order.
EnsembleModel init_model(int n_layers, std::size_t feature_dim, std::uint64_t seed,
                         double init_scale);

/// Called after every update with the iteration number (1-based) and model.
using IterationObserver = std::function<void(int, const EnsembleModel&)>;

/// Full-batch gradient descent: w <- w - learning_rate * batch_gradient.
/// Throws NumericFailure if the cost or any weight becomes non-finite.
TrainResult train(const Dataset& data, const TrainConfig& config, int n_layers,
                  const IterationObserver& observer = {});

/// CSV with header `iteration,cost`.
void write_cost_history_csv(const std::vector<CostRecord>& history,
                            const std::filesystem::path& path);
std::vector<CostRecord> read_cost_history_csv(const std::filesystem::path& path);

}  // namespace logens
