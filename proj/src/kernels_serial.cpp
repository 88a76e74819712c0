// Reference kernels. Kept single-threaded and as plain as possible; the
// OpenMP kernels are tested for bit equality against these.

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "logens/gradient.hpp"
#include "logens/kernels.hpp"
#include "logens/probability.hpp"

namespace logens::serial {

double batch_cost(const EnsembleModel& model, const Dataset& data) {
  ActivationCache cache;
  double total = 0.0;
  for (std::size_t k = 0; k < data.size(); ++k) {
    all_activations(model, data.x(k), cache);
    const double p = label_probability(cache, model.n_layers(), data.y(k));
    total += -std::log(std::max(p, kProbabilityFloor));
  }
  return total;
}

Matrix batch_gradient(const EnsembleModel& model, const Dataset& data) {
  const std::size_t nodes = model.node_count();
  const std::size_t dim = model.feature_dim();
  if (data.feature_dim() != dim)
    throw std::invalid_argument("dataset and model feature dimensions differ");
  Matrix grad(nodes, dim + 1);
  ActivationCache cache;
  NodeTerms terms;
  std::vector<double> factors(nodes);
  for (std::size_t k = 0; k < data.size(); ++k) {
    const auto x = data.x(k);
    all_activations(model, x, cache);
    node_factors(cache, model.n_layers(), data.y(k), terms, factors);
    for (std::size_t r = 0; r < nodes; ++r) {
      grad(r, 0) += factors[r];
      for (std::size_t i = 0; i < dim; ++i) grad(r, i + 1) += factors[r] * x[i];
    }
  }
  return grad;
}

std::vector<double> class1_scores(const EnsembleModel& model, const Matrix& features) {
  std::vector<double> scores(features.rows());
  ActivationCache cache;
  for (std::size_t k = 0; k < features.rows(); ++k) {
    all_activations(model, features.row(k), cache);
    scores[k] = label_probability(cache, model.n_layers(), 1);
  }
  return scores;
}

}  // namespace logens::serial

namespace logens {

std::vector<double> class1_scores(const EnsembleModel& model, const Matrix& features,
                                  Execution exec) {
  if (features.cols() != model.feature_dim())
    throw std::invalid_argument("feature matrix and model feature dimensions differ");
  return exec == Execution::serial ? serial::class1_scores(model, features)
                                   : omp::class1_scores(model, features);
}

}  // namespace logens
