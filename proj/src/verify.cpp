#include "logens/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "logens/probability.hpp"
#include "logens/random.hpp"

namespace logens {

RandomProblem make_random_problem(int n_layers, std::size_t feature_dim, std::size_t points,
                                  std::uint64_t seed) {
  if (points == 0) throw std::invalid_argument("need at least one point");
  Rng rng(seed);
  EnsembleModel model(n_layers, feature_dim);
  for (double& w : model.weights().flat()) w = rng.normal();
  Dataset data;
  data.features = Matrix(points, feature_dim);
  for (double& v : data.features.flat()) v = rng.normal();
  data.labels.resize(points);
  for (int& y : data.labels) y = static_cast<int>(rng.below(2));
  return {std::move(model), std::move(data)};
}

double max_relative_error(const GradientMatrix& a, const GradientMatrix& b, double floor) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("gradient shapes differ");
  double worst = 0.0;
  for (std::size_t e = 0; e < a.size(); ++e) {
    const double x = a.flat()[e];
    const double y = b.flat()[e];
    const double scale = std::max(std::abs(x), std::abs(y));
    if (scale > floor) worst = std::max(worst, std::abs(x - y) / scale);
  }
  return worst;
}

GradcheckReport run_gradcheck(const GradcheckOptions& options) {
  const auto problem =
      make_random_problem(options.n_layers, options.feature_dim, options.points, options.seed);
  GradientMatrix analytic = batch_gradient(problem.model, problem.data);
  if (options.corrupt_gradient) analytic(0, 0) = analytic(0, 0) * 1.5 + 1e-3;
  const GradientMatrix numeric = finite_difference_gradient(problem.model, problem.data, options.step);

  GradcheckReport report;
  report.gradient_rel_error = max_relative_error(analytic, numeric);
  for (std::size_t k = 0; k < problem.data.size(); ++k) {
    for (int y : {0, 1}) {
      const double recursive = label_probability(problem.model, problem.data.x(k), y);
      const double oracle = mixture_oracle(problem.model, problem.data.x(k), y);
      report.probability_abs_error =
          std::max(report.probability_abs_error, std::abs(recursive - oracle));
    }
  }
  report.gradient_ok = report.gradient_rel_error <= options.gradient_tolerance;
  report.probability_ok = report.probability_abs_error <= options.probability_tolerance;
  return report;
}

}  // namespace logens
