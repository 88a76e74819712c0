#include "logens/gradient.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "logens/errors.hpp"
#include "logens/probability.hpp"

namespace logens {

void compute_node_terms(const ActivationCache& cache, int n_layers, int y, NodeTerms& terms) {
  check_label(y);
  const std::size_t nodes = node_count(n_layers);
  if (cache.size() != nodes)
    throw std::invalid_argument("activation cache does not match a " + std::to_string(n_layers) +
                                "-layer ensemble");
  terms.path.resize(nodes);
  terms.subtree.resize(nodes);

  // Children have larger indices than their parent, so a reverse sweep sees
  // both subtrees before the node itself.
  for (NodeIndex j = nodes; j >= 1; --j) {
    const double h = cache.activation(j);
    if (is_leaf(n_layers, j)) {
      terms.subtree[j - 1] = y == 1 ? h : 1.0 - h;
    } else {
      const double left = terms.subtree[left_child(j) - 1];
      const double right = terms.subtree[right_child(j) - 1];
      terms.subtree[j - 1] = h * (left - right) + right;
    }
  }

  terms.path[0] = 1.0;
  for (NodeIndex j = 2; j <= nodes; ++j) {
    const double h = cache.activation(parent(j));
    terms.path[j - 1] = terms.path[parent(j) - 1] * ((j % 2 == 0) ? h : 1.0 - h);
  }

  terms.probability = std::max(terms.subtree[0], kProbabilityFloor);
}

void node_factors(const ActivationCache& cache, int n_layers, int y, NodeTerms& scratch,
                  std::span<double> factors) {
  compute_node_terms(cache, n_layers, y, scratch);
  const std::size_t nodes = node_count(n_layers);
  if (factors.size() != nodes) throw std::invalid_argument("factor buffer has the wrong length");
  const double p_total = scratch.probability;
  for (NodeIndex j = 1; j <= nodes; ++j) {
    const double h = cache.activation(j);
    const double path = scratch.path[j - 1];
    double f;
    if (is_leaf(n_layers, j)) {
      const double leaf = scratch.subtree[j - 1];
      f = -(path * (leaf / p_total)) * (static_cast<double>(y) - h);
    } else {
      const double spread = scratch.subtree[left_child(j) - 1] - scratch.subtree[right_child(j) - 1];
      f = -(path * h * (1.0 - h) * spread) / p_total;
    }
    if (!std::isfinite(f))
      throw NumericFailure("non-finite gradient factor at node " + std::to_string(j));
    factors[j - 1] = f;
  }
}

double cost(const EnsembleModel& model, const Dataset& data, Execution exec) {
  data.validate();
  return exec == Execution::serial ? serial::batch_cost(model, data) : omp::batch_cost(model, data);
}

double log_likelihood(const EnsembleModel& model, const Dataset& data, Execution exec) {
  return -cost(model, data, exec);
}

double subtree_label_probability(const ActivationCache& cache, int y, int n_layers, NodeIndex j) {
  if (j < 1 || j > node_count(n_layers))
    throw std::out_of_range("node index " + std::to_string(j) + " outside a " +
                            std::to_string(n_layers) + "-layer ensemble");
  NodeTerms terms;
  compute_node_terms(cache, n_layers, y, terms);
  return terms.subtree[j - 1];
}

namespace {

void check_point(const EnsembleModel& model, const ActivationCache& cache,
                 std::span<const double> x) {
  if (x.size() != model.feature_dim())
    throw std::invalid_argument("feature vector has length " + std::to_string(x.size()) +
                                ", model expects " + std::to_string(model.feature_dim()));
  if (cache.size() != model.node_count())
    throw std::invalid_argument("activation cache does not belong to this model");
}

}  // namespace

GradientMatrix point_gradient(const EnsembleModel& model, const ActivationCache& cache,
                              std::span<const double> x, int y) {
  check_point(model, cache, x);
  NodeTerms terms;
  std::vector<double> factors(model.node_count());
  node_factors(cache, model.n_layers(), y, terms, factors);
  GradientMatrix grad(model.node_count(), model.feature_dim() + 1);
  for (std::size_t r = 0; r < grad.rows(); ++r) {
    grad(r, 0) = factors[r];
    for (std::size_t i = 0; i < x.size(); ++i) grad(r, i + 1) = factors[r] * x[i];
  }
  return grad;
}

std::vector<double> parent_of_leaf_gradient(const EnsembleModel& model,
                                            const ActivationCache& cache,
                                            std::span<const double> x, int y, NodeIndex j) {
  check_point(model, cache, x);
  const int n = model.n_layers();
  if (n < 2 || j < first_leaf(n - 1) || j >= first_leaf(n))
    throw std::out_of_range("node " + std::to_string(j) + " is not a parent of leaves");
  const double h = cache.activation(j);
  const double p_left = leaf_term(cache.activation(left_child(j)), y);
  const double p_right = leaf_term(cache.activation(right_child(j)), y);
  const double p_total = std::max(label_probability(cache, n, y), kProbabilityFloor);
  const double path = path_probability(cache, n - 1, j);
  const double f = -(path * h * (1.0 - h) * (p_left - p_right)) / p_total;
  std::vector<double> row(x.size() + 1);
  row[0] = f;
  for (std::size_t i = 0; i < x.size(); ++i) row[i + 1] = f * x[i];
  return row;
}

GradientMatrix batch_gradient(const EnsembleModel& model, const Dataset& data, Execution exec) {
  data.validate();
  return exec == Execution::serial ? serial::batch_gradient(model, data)
                                   : omp::batch_gradient(model, data);
}

namespace {

/// sigma(z + delta) - sigma(z - delta) without cancellation, taking the
/// half-width delta as exact rather than as the difference of two rounded
/// arguments. Falls back to the clamped sigmoid once either side saturates.
double sigmoid_difference(double z, double delta) {
  const double sp = sigmoid(z + delta), sm = sigmoid(z - delta);
  const double lo = kProbabilityFloor, hi = 1.0 - kProbabilityFloor;
  if (sp <= lo || sp >= hi || sm <= lo || sm >= hi) return sp - sm;
  return std::sinh(delta) / (2.0 * std::cosh(0.5 * (z + delta)) * std::cosh(0.5 * (z - delta)));
}

}  // namespace

GradientMatrix finite_difference_gradient(const EnsembleModel& model, const Dataset& data,
                                          double step) {
  if (!(step > 0.0) || !std::isfinite(step))
    throw std::invalid_argument("finite-difference step must be positive");
  data.validate();
  if (data.feature_dim() != model.feature_dim())
    throw std::invalid_argument("dataset and model feature dimensions differ");

  const int n = model.n_layers();
  const std::size_t cols = model.feature_dim() + 1;
  GradientMatrix grad(model.node_count(), cols);
  ActivationCache cache;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const auto x = data.x(k);
    const int y = data.y(k);
    all_activations(model, x, cache);
    for (NodeIndex j = 1; j <= model.node_count(); ++j) {
      // Moving w_ji only moves h_j, and P is affine in each h_j: P = p0 + a h_j.
      const double h = cache.h[j - 1];
      cache.h[j - 1] = 1.0;
      const double p1 = label_probability(cache, n, y);
      cache.h[j - 1] = 0.0;
      const double p0 = label_probability(cache, n, y);
      cache.h[j - 1] = h;
      const double a = p1 - p0;
      const double z = cache.z[j - 1];
      for (std::size_t i = 0; i < cols; ++i) {
        const double xi = i == 0 ? 1.0 : x[i - 1];
        const double delta = step * xi;
        const double p_plus = p0 + a * sigmoid(z + delta);
        const double p_minus = p0 + a * sigmoid(z - delta);
        double diff;
        if (p_plus > kProbabilityFloor && p_minus > kProbabilityFloor)
          diff = -std::log1p(a * sigmoid_difference(z, delta) / p_minus);
        else
          diff = std::log(std::max(p_minus, kProbabilityFloor)) -
                 std::log(std::max(p_plus, kProbabilityFloor));
        grad(j - 1, i) += diff;
      }
    }
  }
  for (double& g : grad.flat()) g /= 2.0 * step;
  return grad;
}

}  // namespace logens
