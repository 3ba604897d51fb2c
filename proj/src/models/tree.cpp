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

#include "citykpi/models/tree.hpp"

#include <algorithm>
#include <optional>

#include "citykpi/error.hpp"

namespace citykpi {
namespace {

using u128 = unsigned __int128;

// Weighted Gini of a split is minimal when
//   (l0^2 + l1^2) / nl + (r0^2 + r1^2) / nr
// is maximal. Keeping that quantity as an integer fraction makes ties exact.
struct SplitQuality {
  u128 numerator = 0;
  u128 denominator = 1;

  static SplitQuality Of(std::size_t l0, std::size_t l1, std::size_t r0,
                         std::size_t r1) {
    const u128 nl = l0 + l1;
    const u128 nr = r0 + r1;
    const u128 sl = static_cast<u128>(l0) * l0 + static_cast<u128>(l1) * l1;
    const u128 sr = static_cast<u128>(r0) * r0 + static_cast<u128>(r1) * r1;
    return {sl * nr + sr * nl, nl * nr};
  }

  bool BetterThan(const SplitQuality& other) const {
    return numerator * other.denominator > other.numerator * denominator;
  }
};

struct Candidate {
  SplitQuality quality;
  std::size_t feature = 0;
  double threshold = 0.0;
};

class Builder {
 public:
  Builder(const FeatureMatrix& x, const LabelVector& y, const TreeConfig& config)
      : x_(x), y_(y), config_(config) {}

  TreeModel Build() {
    std::vector<std::size_t> all(x_.rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    model_.num_features = x_.cols();
    Grow(all, 0);
    return std::move(model_);
  }

 private:
  std::size_t Grow(std::vector<std::size_t>& indices, int depth) {
    TreeNode node;
    for (std::size_t i : indices) ++node.class_counts[y_[i]];
    node.label = node.class_counts[1] > node.class_counts[0] ? 1 : 0;

    const std::size_t id = model_.nodes.size();
    model_.nodes.push_back(node);

    const bool pure = node.class_counts[0] == 0 || node.class_counts[1] == 0;
    const bool depth_reached = config_.max_depth && depth >= *config_.max_depth;
    const bool too_small =
        indices.size() < static_cast<std::size_t>(config_.min_samples_split);
    if (pure || depth_reached || too_small) return id;

    const auto best = FindBestSplit(indices, node.class_counts);
    if (!best) return id;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t i : indices) {
      (x_(i, best->feature) <= best->threshold ? left : right).push_back(i);
    }
    const std::size_t left_id = Grow(left, depth + 1);
    const std::size_t right_id = Grow(right, depth + 1);

    TreeNode& stored = model_.nodes[id];
    stored.is_leaf = false;
    stored.feature_index = best->feature;
    stored.threshold = best->threshold;
    stored.left = left_id;
    stored.right = right_id;
    return id;
  }

  std::optional<Candidate> FindBestSplit(
      std::vector<std::size_t>& indices,
      const std::array<std::size_t, 2>& totals) const {
    std::optional<Candidate> best;
    for (std::size_t j = 0; j < x_.cols(); ++j) {
      std::stable_sort(indices.begin(), indices.end(),
                       [&](std::size_t a, std::size_t b) {
                         return x_(a, j) < x_(b, j);
                       });
      std::array<std::size_t, 2> left{0, 0};
      for (std::size_t k = 0; k + 1 < indices.size(); ++k) {
        ++left[y_[indices[k]]];
        const double lo = x_(indices[k], j);
        const double hi = x_(indices[k + 1], j);
        if (!(lo < hi)) continue;
        const auto quality =
            SplitQuality::Of(left[0], left[1], totals[0] - left[0],
                             totals[1] - left[1]);
        if (best && !quality.BetterThan(best->quality)) continue;
        double threshold = lo + (hi - lo) / 2.0;
        // Adjacent doubles can round the midpoint up to hi.
        if (!(threshold < hi)) threshold = lo;
        best = Candidate{quality, j, threshold};
      }
    }
    return best;
  }

  const FeatureMatrix& x_;
  const LabelVector& y_;
  const TreeConfig& config_;
  TreeModel model_;
};

std::size_t DepthFrom(const TreeModel& model, std::size_t id) {
  const TreeNode& node = model.nodes[id];
  if (node.is_leaf) return 0;
  return 1 + std::max(DepthFrom(model, node.left), DepthFrom(model, node.right));
}

}  // namespace

double GiniImpurity(std::size_t count0, std::size_t count1) {
  const double n = static_cast<double>(count0 + count1);
  if (n == 0.0) return 0.0;
  const double p0 = static_cast<double>(count0) / n;
  const double p1 = static_cast<double>(count1) / n;
  return 1.0 - (p0 * p0 + p1 * p1);
}

const TreeNode& TreeModel::LeafFor(std::span<const double> x) const {
  if (x.size() != num_features) {
    throw Error(ErrorCode::kWidthMismatch, "tree model width mismatch");
  }
  if (nodes.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "tree model has no nodes");
  }
  std::size_t id = 0;
  while (!nodes[id].is_leaf) {
    const TreeNode& node = nodes[id];
    id = x[node.feature_index] <= node.threshold ? node.left : node.right;
  }
  return nodes[id];
}

double TreeModel::Probability(std::span<const double> x) const {
  const TreeNode& leaf = LeafFor(x);
  const auto total = leaf.class_counts[0] + leaf.class_counts[1];
  if (total == 0) return static_cast<double>(leaf.label);
  return static_cast<double>(leaf.class_counts[1]) / static_cast<double>(total);
}

std::size_t TreeModel::Depth() const {
  return nodes.empty() ? 0 : DepthFrom(*this, 0);
}

TreeModel TreeFit(const FeatureMatrix& x, const LabelVector& y,
                  const TreeConfig& config) {
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch, "X and y differ in length");
  }
  return Builder(x, y, config).Build();
}

}  // namespace citykpi
