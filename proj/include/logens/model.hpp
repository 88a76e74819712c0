#pragma once

#include <bit>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "logens/matrix.hpp"

namespace logens {

// Nodes of an n-layer ensemble form a complete binary tree stored heap-style
// with 1-based indices: node j has children 2j and 2j+1, the root is 1, and
// the leaves are exactly [2^(n-1), 2^n - 1].
using NodeIndex = std::size_t;

inline constexpr int kMaxLayers = 24;

/// Lower/upper clamp applied to every sigmoid output.
inline constexpr double kProbabilityFloor = 1e-12;

constexpr std::size_t node_count(int n_layers) { return (std::size_t{1} << n_layers) - 1; }
constexpr NodeIndex first_leaf(int n_layers) { return NodeIndex{1} << (n_layers - 1); }
constexpr std::size_t leaf_count(int n_layers) { return std::size_t{1} << (n_layers - 1); }
constexpr bool is_leaf(int n_layers, NodeIndex j) { return 2 * j >= (NodeIndex{1} << n_layers); }
constexpr NodeIndex parent(NodeIndex j) { return j / 2; }
constexpr NodeIndex left_child(NodeIndex j) { return 2 * j; }
constexpr NodeIndex right_child(NodeIndex j) { return 2 * j + 1; }
/// Layer that node j lives on; the root is on layer 1.
constexpr int node_depth(NodeIndex j) { return static_cast<int>(std::bit_width(j)); }

/// Overflow-safe logistic function clamped to [1e-12, 1 - 1e-12].
/// Throws std::invalid_argument for non-finite z.
double sigmoid(double z);

/// Complete binary tree of logistic units. Row j-1 of the weight matrix holds
/// node j's bias followed by its feature coefficients.
class EnsembleModel {
 public:
  EnsembleModel(int n_layers, std::size_t feature_dim);
  EnsembleModel(int n_layers, std::size_t feature_dim, Matrix weights);

  int n_layers() const { return n_layers_; }
  std::size_t feature_dim() const { return feature_dim_; }
  std::size_t node_count() const { return weights_.rows(); }

  const Matrix& weights() const { return weights_; }
  /// Mutable access for optimizers; callers keep every entry finite.
  Matrix& weights() { return weights_; }

  std::span<const double> node_weights(NodeIndex j) const;

  bool operator==(const EnsembleModel&) const = default;

 private:
  int n_layers_;
  std::size_t feature_dim_;
  Matrix weights_;
};

/// Per-sample linear terms and activations of every node, indexed j-1.
struct ActivationCache {
  std::vector<double> z;
  std::vector<double> h;

  std::size_t size() const { return h.size(); }
  double activation(NodeIndex j) const { return h[j - 1]; }
};

double node_activation(const EnsembleModel& model, NodeIndex j, std::span<const double> x);

ActivationCache all_activations(const EnsembleModel& model, std::span<const double> x);
/// Reuses the buffers of an existing cache.
void all_activations(const EnsembleModel& model, std::span<const double> x, ActivationCache& cache);

// JSON model document: {"n_layers": int, "feature_dim": int, "weights": [[real]]}.
std::string model_to_json(const EnsembleModel& model);
EnsembleModel model_from_json(std::string_view text);
void save_model(const EnsembleModel& model, const std::filesystem::path& path);
EnsembleModel load_model(const std::filesystem::path& path);

}  // namespace logens
