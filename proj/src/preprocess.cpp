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

#include "citykpi/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "citykpi/error.hpp"
#include "citykpi/random.hpp"

namespace citykpi {

std::vector<double> Scaler::Apply(std::span<const double> x) const {
  if (x.size() != means.size()) {
    throw Error(ErrorCode::kWidthMismatch,
                "scaler expects " + std::to_string(means.size()) +
                    " features, got " + std::to_string(x.size()));
  }
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    out[j] = stds[j] == 0.0 ? 0.0 : (x[j] - means[j]) / stds[j];
  }
  return out;
}

Dataset DropMissing(const Dataset& dataset) {
  std::vector<Row> kept;
  for (const Row& row : dataset.rows()) {
    if (std::all_of(row.begin(), row.end(),
                    [](const Cell& c) { return c.has_value(); })) {
      kept.push_back(row);
    }
  }
  if (kept.empty()) {
    throw Error(ErrorCode::kEmptyResult,
                "no complete rows remain after dropping missing values");
  }
  return Dataset(dataset.schema(), std::move(kept));
}

std::pair<FeatureMatrix, LabelVector> SplitXY(const Dataset& dataset) {
  const auto target = dataset.target_index();
  if (!target) {
    throw Error(ErrorCode::kMissingTarget, "dataset has no target column");
  }
  const auto features = dataset.feature_indices();
  const std::size_t n = dataset.row_count();
  std::vector<double> values;
  values.reserve(n * features.size());
  std::vector<int> labels;
  labels.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    const Row& row = dataset.rows()[r];
    for (std::size_t c : features) {
      if (!row[c]) {
        throw Error(ErrorCode::kInvalidArgument,
                    "row " + std::to_string(r) + " has a missing feature");
      }
      values.push_back(*row[c]);
    }
    const Cell& t = row[*target];
    if (!t || (*t != 0.0 && *t != 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "row " + std::to_string(r) + " has no binary target");
    }
    labels.push_back(static_cast<int>(*t));
  }
  return {FeatureMatrix(n, features.size(), std::move(values),
                        dataset.feature_names()),
          LabelVector(std::move(labels))};
}

std::size_t TestSetSize(std::size_t n, double test_fraction) {
  const double product = test_fraction * static_cast<double>(n);
  const double nearest = std::round(product);
  // 0.1 * 30 evaluates to 3.0000000000000004; treat such products as the
  // integer they represent rather than rounding them up.
  if (std::abs(product - nearest) <= 1e-9 * std::max(1.0, product)) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::ceil(product));
}

Split TrainTestSplit(std::size_t n, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorCode::kBadFraction, "test fraction must lie in (0, 1)");
  }
  if (n < 2) {
    throw Error(ErrorCode::kTooFewRows, "need at least 2 rows to split");
  }
  const std::size_t test_size = TestSetSize(n, test_fraction);
  if (test_size >= n) {
    throw Error(ErrorCode::kBadFraction,
                "test fraction leaves no rows for training");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  SplitMix64 rng(seed);
  for (std::size_t i = n - 1; i >= 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.Next() % (i + 1));
    std::swap(order[i], order[j]);
  }

  Split split;
  split.seed = seed;
  split.test_fraction = test_fraction;
  split.test_indices.assign(order.begin(), order.begin() + test_size);
  split.train_indices.assign(order.begin() + test_size, order.end());
  return split;
}

Split TrainTestSplit(const FeatureMatrix& x, const LabelVector& y,
                     double test_fraction, std::uint64_t seed) {
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch, "X and y differ in length");
  }
  return TrainTestSplit(x.rows(), test_fraction, seed);
}

Scaler StandardizeFit(const FeatureMatrix& x_train) {
  const std::size_t n = x_train.rows();
  const std::size_t p = x_train.cols();
  Scaler scaler;
  scaler.means.assign(p, 0.0);
  scaler.stds.assign(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += x_train(i, j);
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = x_train(i, j) - mean;
      ss += d * d;
    }
    scaler.means[j] = mean;
    scaler.stds[j] = std::sqrt(ss / static_cast<double>(n));
  }
  return scaler;
}

FeatureMatrix StandardizeApply(const Scaler& scaler, const FeatureMatrix& x) {
  if (scaler.width() != x.cols() || scaler.stds.size() != x.cols()) {
    throw Error(ErrorCode::kWidthMismatch,
                "scaler width does not match feature matrix");
  }
  std::vector<double> values;
  values.reserve(x.rows() * x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto scaled = scaler.Apply(x.row(i));
    values.insert(values.end(), scaled.begin(), scaled.end());
  }
  return FeatureMatrix(x.rows(), x.cols(), std::move(values),
                       x.feature_names());
}

nlohmann::json ScalerToJson(const Scaler& scaler) {
  return {{"means", scaler.means}, {"stds", scaler.stds}};
}

Scaler ScalerFromJson(const nlohmann::json& json) {
  Scaler scaler;
  scaler.means = json.at("means").get<std::vector<double>>();
  scaler.stds = json.at("stds").get<std::vector<double>>();
  if (scaler.means.size() != scaler.stds.size()) {
    throw Error(ErrorCode::kMalformedInput, "scaler means/stds differ in size");
  }
  for (double s : scaler.stds) {
    if (!(s >= 0.0)) {
      throw Error(ErrorCode::kMalformedInput, "scaler std must be >= 0");
    }
  }
  return scaler;
}

}  // namespace citykpi
