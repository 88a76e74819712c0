#pragma once

#include <span>

#include "logens/model.hpp"

namespace logens {

/// Probability a single node assigns to the observed label: h for y = 1 and
/// 1 - h for y = 0.
double leaf_term(double h, int y);

/// Throws std::invalid_argument unless y is 0 or 1.
void check_label(int y);

/// P(y | x) by depth-first recursion from the root. An interior node j mixes
/// its subtrees as h_j * (L - R) + R, where L and R are the values of the
/// subtrees rooted at 2j and 2j+1; a leaf contributes leaf_term(h_j, y).
double label_probability(const EnsembleModel& model, std::span<const double> x, int y);
double label_probability(const ActivationCache& cache, int n_layers, int y);

/// The in-group probability P(1 | x).
double class1_probability(const EnsembleModel& model, std::span<const double> x);

/// Product of routing probabilities from the root down to node j. Taking the
/// left child 2j costs h_parent, taking the right child costs 1 - h_parent.
double path_probability(const ActivationCache& cache, int n_layers, NodeIndex j);

/// Independent check of label_probability: enumerates every root-to-leaf
/// path and sums path weight times leaf term, without the recursive rule.
double mixture_oracle(const EnsembleModel& model, std::span<const double> x, int y);

}  // namespace logens
