#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the code paths it is used to check.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "logens/dataset.hpp"
#include "logens/matrix.hpp"
#include "logens/model.hpp"
#include "logens/random.hpp"

namespace logens::testing {

/// P(score_pos > score_neg) + 0.5 P(tie) over all positive/negative pairs.
inline double pairwise_auc(std::span<const double> scores, std::span<const int> labels) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < scores.size(); ++a) {
    if (labels[a] != 1) continue;
    for (std::size_t b = 0; b < scores.size(); ++b) {
      if (labels[b] != 0) continue;
      ++pairs;
      if (scores[a] > scores[b]) wins += 1.0;
      else if (scores[a] == scores[b]) wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

/// Three-layer in-group probability written out by hand from the seven
/// node activations h[0..6] = h_1..h_7.
inline double three_layer_class1(std::span<const double> h) {
  const double h1 = h[0], h2 = h[1], h3 = h[2], h4 = h[3], h5 = h[4], h6 = h[5], h7 = h[6];
  const double left = h2 * (h4 - h5) + h5;
  const double right = h3 * (h6 - h7) + h7;
  return h1 * (left - right) + right;
}

/// Same expression expanded into the four weighted leaves.
inline double three_layer_class1_expanded(std::span<const double> h) {
  const double h1 = h[0], h2 = h[1], h3 = h[2], h4 = h[3], h5 = h[4], h6 = h[5], h7 = h[6];
  return h1 * h2 * h4 + h1 * (1 - h2) * h5 + (1 - h1) * h3 * h6 + (1 - h1) * (1 - h3) * h7;
}

/// Logistic function in extended precision, no clamping.
inline long double sigmoid_ld(long double z) { return 1.0L / (1.0L + std::exp(-z)); }

inline double logit(double p) { return std::log(p / (1.0 - p)); }

/// Label probability by summing path products over every leaf, in long
/// double, straight from the weights.
inline long double enumerated_probability_ld(const Matrix& w, int n, std::span<const double> x,
                                              int y) {
  const std::size_t nodes = (std::size_t{1} << n) - 1;
  std::vector<long double> h(nodes);
  for (std::size_t r = 0; r < nodes; ++r) {
    long double z = w(r, 0);
    for (std::size_t i = 0; i < x.size(); ++i) z += w(r, i + 1) * static_cast<long double>(x[i]);
    h[r] = sigmoid_ld(z);
  }
  long double total = 0.0L;
  const std::size_t first = std::size_t{1} << (n - 1);
  for (std::size_t leaf = first; leaf <= nodes; ++leaf) {
    long double path = 1.0L;
    for (std::size_t j = leaf; j > 1; j /= 2) path *= (j % 2 == 0) ? h[j / 2 - 1] : 1.0L - h[j / 2 - 1];
    total += path * (y == 1 ? h[leaf - 1] : 1.0L - h[leaf - 1]);
  }
  return total;
}

/// Textbook central differences of the summed cost in long double.
inline Matrix plain_central_differences(const EnsembleModel& model, const Dataset& data,
                                        double step) {
  Matrix w = model.weights();
  Matrix grad(w.rows(), w.cols());
  for (std::size_t e = 0; e < w.size(); ++e) {
    const double saved = w.flat()[e];
    long double diff = 0.0L;
    for (std::size_t k = 0; k < data.size(); ++k) {
      w.flat()[e] = saved + step;
      const long double plus = -std::log(enumerated_probability_ld(w, model.n_layers(), data.x(k), data.y(k)));
      w.flat()[e] = saved - step;
      const long double minus = -std::log(enumerated_probability_ld(w, model.n_layers(), data.x(k), data.y(k)));
      diff += plus - minus;
    }
    w.flat()[e] = saved;
    grad.flat()[e] = static_cast<double>(diff / (2.0L * step));
  }
  return grad;
}

/// Two clusters side by side along x1. Inside the left cluster the label is
/// 1 above x2 = 0, inside the right cluster it is 1 below; no single line
/// separates the union, but each cluster alone is separable.
inline Dataset two_cluster_xor(std::size_t per_cluster, std::uint64_t seed) {
  Rng rng(seed);
  Dataset data;
  data.features = Matrix(2 * per_cluster, 2);
  data.labels.resize(2 * per_cluster);
  data.feature_names = {"x1", "x2"};
  for (std::size_t k = 0; k < 2 * per_cluster; ++k) {
    const bool right = k >= per_cluster;
    const double x1 = (right ? 2.0 : -2.0) + 0.4 * rng.normal();
    double x2 = rng.normal();
    if (std::abs(x2) < 0.15) x2 = x2 < 0 ? -0.15 : 0.15;
    data.features(k, 0) = x1;
    data.features(k, 1) = x2;
    data.labels[k] = ((x2 > 0) != right) ? 1 : 0;
  }
  return data;
}

/// Small fixed dataset used for descent and determinism properties.
inline Dataset fixture_dataset() { return two_cluster_xor(24, 20240601); }

}  // namespace logens::testing
