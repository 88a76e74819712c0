#pragma once

#include <cstdint>

#include "logens/dataset.hpp"
#include "logens/gradient.hpp"
#include "logens/model.hpp"

namespace logens {

struct RandomProblem {
  EnsembleModel model;
  Dataset data;
};

/// Model weights, features ~ Normal(0, 1) and fair-coin labels, all drawn
/// from logens::Rng(seed).
RandomProblem make_random_problem(int n_layers, std::size_t feature_dim, std::size_t points,
                                  std::uint64_t seed);

/// Largest |a - b| / max(|a|, |b|) over entries where max(|a|, |b|) > floor.
double max_relative_error(const GradientMatrix& a, const GradientMatrix& b, double floor = 1e-8);

struct GradcheckOptions {
  int n_layers = 3;
  std::size_t feature_dim = 10;
  std::size_t points = 16;
  std::uint64_t seed = 1;
  double step = 1e-6;
  double gradient_tolerance = 1e-6;
  double probability_tolerance = 1e-12;
  /// Test hook: scales one analytical gradient entry to prove the check bites.
  bool corrupt_gradient = false;
};

struct GradcheckReport {
  double gradient_rel_error = 0.0;
  double probability_abs_error = 0.0;
  bool gradient_ok = false;
  bool probability_ok = false;
};

/// Compares batch_gradient against central finite differences and the
/// recursive label probability against the path-enumeration oracle.
GradcheckReport run_gradcheck(const GradcheckOptions& options);

}  // namespace logens
