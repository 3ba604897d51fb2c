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

// Cleansing and transformation: missing-row removal, X/y separation,
// deterministic train/test split and standardization.

#ifndef CITYKPI_PREPROCESS_HPP_
#define CITYKPI_PREPROCESS_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "citykpi/dataset.hpp"
#include "json.hpp"

namespace citykpi {

// Per-feature mean and population standard deviation.
struct Scaler {
  std::vector<double> means;
  std::vector<double> stds;

  std::size_t width() const { return means.size(); }
  // Scales one raw feature vector. A zero std maps the feature to 0.
  std::vector<double> Apply(std::span<const double> x) const;

  bool operator==(const Scaler&) const = default;
};

// Keeps exactly the rows without MISSING cells, in order.
// Throws kEmptyResult when nothing is left.
Dataset DropMissing(const Dataset& dataset);

// X = feature columns in schema order, y = the target column.
// Throws kMissingTarget when the dataset has no target.
std::pair<FeatureMatrix, LabelVector> SplitXY(const Dataset& dataset);

// Number of test rows for a split: ceil(test_fraction * n).
std::size_t TestSetSize(std::size_t n, double test_fraction);

// Fisher-Yates shuffle of 0..n-1 driven by splitmix64(seed); the first
// TestSetSize() shuffled indices are the test set, the rest the training set.
Split TrainTestSplit(std::size_t n, double test_fraction, std::uint64_t seed);
Split TrainTestSplit(const FeatureMatrix& x, const LabelVector& y,
                     double test_fraction, std::uint64_t seed);

Scaler StandardizeFit(const FeatureMatrix& x_train);
FeatureMatrix StandardizeApply(const Scaler& scaler, const FeatureMatrix& x);

nlohmann::json ScalerToJson(const Scaler& scaler);
Scaler ScalerFromJson(const nlohmann::json& json);

}  // namespace citykpi

#endif  // CITYKPI_PREPROCESS_HPP_
