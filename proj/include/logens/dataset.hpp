#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "logens/matrix.hpp"

namespace logens {

/// K x d feature matrix with one binary label per row.
struct Dataset {
  Matrix features;
  std::vector<int> labels;
  std::vector<std::string> feature_names;

  std::size_t size() const { return labels.size(); }
  std::size_t feature_dim() const { return features.cols(); }
  std::span<const double> x(std::size_t k) const { return features.row(k); }
  int y(std::size_t k) const { return labels[k]; }

  /// Throws std::invalid_argument unless the dataset is non-empty, finite,
  /// consistently shaped and binary-labelled.
  void validate() const;
};

}  // namespace logens
