/*
 * Copyright 2026 The citykpi Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CITYKPI_MODELS_TREE_HPP_
#define CITYKPI_MODELS_TREE_HPP_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "citykpi/dataset.hpp"
#include "citykpi/train_config.hpp"

namespace citykpi {

struct TreeNode {
  bool is_leaf = true;
  // Leaf payload. label is the majority class, ties going to class 0.
  int label = 0;
  std::array<std::size_t, 2> class_counts{0, 0};
  // Internal payload: x[feature_index] <= threshold goes left.
  std::size_t feature_index = 0;
  double threshold = 0.0;
  std::size_t left = 0;
  std::size_t right = 0;

  bool operator==(const TreeNode&) const = default;
};

// Nodes are stored flat; nodes[0] is the root and children always follow
// their parent.
struct TreeModel {
  std::vector<TreeNode> nodes;
  std::size_t num_features = 0;

  const TreeNode& LeafFor(std::span<const double> x) const;
  // Fraction of class-1 training samples in the leaf reached by x.
  double Probability(std::span<const double> x) const;
  std::size_t Depth() const;

  bool operator==(const TreeModel&) const = default;
};

double GiniImpurity(std::size_t count0, std::size_t count1);

// CART with Gini impurity. Candidate thresholds are midpoints between
// consecutive distinct values; ties resolve to the lowest impurity, then the
// lowest feature index, then the lowest threshold.
TreeModel TreeFit(const FeatureMatrix& x, const LabelVector& y,
                  const TreeConfig& config);

}  // namespace citykpi

#endif  // CITYKPI_MODELS_TREE_HPP_
