#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

#include "logens/gradient.hpp"
#include "logens/kernels.hpp"
#include "logens/probability.hpp"

namespace logens::omp {

namespace {

// Exceptions must not escape an OpenMP region; the first one is kept and
// rethrown after the loop.
class ErrorSlot {
 public:
  template <class Body>
  void run(Body&& body) {
    try {
      body();
    } catch (...) {
#pragma omp critical(logens_error_slot)
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

}  // namespace

double batch_cost(const EnsembleModel& model, const Dataset& data) {
  const auto count = static_cast<std::ptrdiff_t>(data.size());
  std::vector<double> per_point(data.size());
  ErrorSlot errors;
#pragma omp parallel
  {
    ActivationCache cache;
#pragma omp for schedule(static)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
      errors.run([&] {
        all_activations(model, data.x(k), cache);
        const double p = label_probability(cache, model.n_layers(), data.y(k));
        per_point[k] = -std::log(std::max(p, kProbabilityFloor));
      });
    }
  }
  errors.rethrow();
  double total = 0.0;
  for (double c : per_point) total += c;
  return total;
}

Matrix batch_gradient(const EnsembleModel& model, const Dataset& data) {
  const std::size_t nodes = model.node_count();
  const std::size_t dim = model.feature_dim();
  if (data.feature_dim() != dim)
    throw std::invalid_argument("dataset and model feature dimensions differ");
  const auto count = static_cast<std::ptrdiff_t>(data.size());

  // Phase 1: per-sample node factors, independent across samples.
  Matrix factors(data.size(), nodes);
  ErrorSlot errors;
#pragma omp parallel
  {
    ActivationCache cache;
    NodeTerms terms;
#pragma omp for schedule(static)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
      errors.run([&] {
        all_activations(model, data.x(k), cache);
        node_factors(cache, model.n_layers(), data.y(k), terms, factors.row(k));
      });
    }
  }
  errors.rethrow();

  // Phase 2: each gradient row is owned by one thread and accumulated in
  // sample order, matching the serial summation exactly.
  Matrix grad(nodes, dim + 1);
  const auto rows = static_cast<std::ptrdiff_t>(nodes);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    auto g = grad.row(r);
    for (std::size_t k = 0; k < data.size(); ++k) {
      const double f = factors(k, r);
      const auto x = data.x(k);
      g[0] += f;
      for (std::size_t i = 0; i < dim; ++i) g[i + 1] += f * x[i];
    }
  }
  return grad;
}

std::vector<double> class1_scores(const EnsembleModel& model, const Matrix& features) {
  std::vector<double> scores(features.rows());
  const auto count = static_cast<std::ptrdiff_t>(features.rows());
  ErrorSlot errors;
#pragma omp parallel
  {
    ActivationCache cache;
#pragma omp for schedule(static)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
      errors.run([&] {
        all_activations(model, features.row(k), cache);
        scores[k] = label_probability(cache, model.n_layers(), 1);
      });
    }
  }
  errors.rethrow();
  return scores;
}

}  // namespace logens::omp
