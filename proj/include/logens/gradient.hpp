#pragma once

#include <span>
#include <vector>

#include "logens/dataset.hpp"
#include "logens/kernels.hpp"
#include "logens/matrix.hpp"
#include "logens/model.hpp"

namespace logens {

/// Same shape as the weight matrix; entry (j-1, i) is dCost/dw_ji.
using GradientMatrix = Matrix;

/// Per-sample quantities shared by every node's gradient.
struct NodeTerms {
  std::vector<double> path;     ///< path probability to node j, index j-1
  std::vector<double> subtree;  ///< label probability of the subtree rooted at j, index j-1
  double probability = 0.0;     ///< clamped P(y | x), equal to subtree[0] unless clamped
};

void compute_node_terms(const ActivationCache& cache, int n_layers, int y, NodeTerms& terms);

/// dCost/dz_j for every node of one sample; the gradient row of node j is
/// this factor times (1, x_1, ..., x_d).
void node_factors(const ActivationCache& cache, int n_layers, int y, NodeTerms& scratch,
                  std::span<double> factors);

/// -sum_k log P(y_k | x_k) with each P clamped at 1e-12.
double cost(const EnsembleModel& model, const Dataset& data,
            Execution exec = Execution::parallel);
double log_likelihood(const EnsembleModel& model, const Dataset& data,
                      Execution exec = Execution::parallel);

/// Label probability of the subtree rooted at node j.
double subtree_label_probability(const ActivationCache& cache, int y, int n_layers, NodeIndex j);

GradientMatrix point_gradient(const EnsembleModel& model, const ActivationCache& cache,
                              std::span<const double> x, int y);

/// Gradient row of a parent-of-leaves node j written directly in terms of the
/// two leaf terms below it, without going through subtree probabilities.
std::vector<double> parent_of_leaf_gradient(const EnsembleModel& model,
                                            const ActivationCache& cache,
                                            std::span<const double> x, int y, NodeIndex j);

/// Summed over the dataset in sample order.
GradientMatrix batch_gradient(const EnsembleModel& model, const Dataset& data,
                              Execution exec = Execution::parallel);

/// Central differences of the cost, one +/- step pair per weight. Each
/// point's difference c(w + step) - c(w - step) is evaluated without
/// subtracting two nearly equal costs: a single weight only moves its own
/// node's activation, and P is affine in that activation.
GradientMatrix finite_difference_gradient(const EnsembleModel& model, const Dataset& data,
                                          double step = 1e-6);

}  // namespace logens
