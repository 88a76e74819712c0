#include "logens/probability.hpp"

#include <stdexcept>
#include <string>

namespace logens {

void check_label(int y) {
  if (y != 0 && y != 1) throw std::invalid_argument("label must be 0 or 1, got " + std::to_string(y));
}

double leaf_term(double h, int y) {
  check_label(y);
  return y == 1 ? h : 1.0 - h;
}

namespace {

double recurse(const ActivationCache& cache, int n_layers, NodeIndex j, int y) {
  const double h = cache.activation(j);
  if (is_leaf(n_layers, j)) return leaf_term(h, y);
  const double left = recurse(cache, n_layers, left_child(j), y);
  const double right = recurse(cache, n_layers, right_child(j), y);
  return h * (left - right) + right;
}

void check_cache(const ActivationCache& cache, int n_layers) {
  if (n_layers < 1 || n_layers > kMaxLayers || cache.size() != node_count(n_layers))
    throw std::invalid_argument("activation cache does not match a " + std::to_string(n_layers) +
                                "-layer ensemble");
}

}  // namespace

double label_probability(const ActivationCache& cache, int n_layers, int y) {
  check_label(y);
  check_cache(cache, n_layers);
  return recurse(cache, n_layers, 1, y);
}

double label_probability(const EnsembleModel& model, std::span<const double> x, int y) {
  check_label(y);
  return label_probability(all_activations(model, x), model.n_layers(), y);
}

double class1_probability(const EnsembleModel& model, std::span<const double> x) {
  return label_probability(model, x, 1);
}

namespace {

double path_from_root(const ActivationCache& cache, NodeIndex j) {
  if (j == 1) return 1.0;
  const double h = cache.activation(parent(j));
  return path_from_root(cache, parent(j)) * ((j % 2 == 0) ? h : 1.0 - h);
}

}  // namespace

double path_probability(const ActivationCache& cache, int n_layers, NodeIndex j) {
  // Only ancestors of j are read, so a cache from a deeper ensemble is fine.
  if (n_layers < 1 || n_layers > kMaxLayers || cache.size() < node_count(n_layers))
    throw std::invalid_argument("activation cache is smaller than a " + std::to_string(n_layers) +
                                "-layer ensemble");
  if (j < 1 || j > node_count(n_layers))
    throw std::out_of_range("node index " + std::to_string(j) + " outside a " +
                            std::to_string(n_layers) + "-layer ensemble");
  return path_from_root(cache, j);
}

double mixture_oracle(const EnsembleModel& model, std::span<const double> x, int y) {
  check_label(y);
  const ActivationCache cache = all_activations(model, x);
  const int n = model.n_layers();
  double total = 0.0;
  // Bits of `path`, most significant first, pick left (0) or right (1) at each level.
  for (std::size_t path = 0; path < leaf_count(n); ++path) {
    NodeIndex node = 1;
    double weight = 1.0;
    for (int level = n - 2; level >= 0; --level) {
      const double h = cache.activation(node);
      if ((path >> level) & 1U) {
        weight *= 1.0 - h;
        node = right_child(node);
      } else {
        weight *= h;
        node = left_child(node);
      }
    }
    const double h_leaf = cache.activation(node);
    total += weight * (y == 1 ? h_leaf : 1.0 - h_leaf);
  }
  return total;
}

}  // namespace logens
