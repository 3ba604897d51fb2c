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

#include "citykpi/models/naive_bayes.hpp"

#include <cmath>

#include "citykpi/error.hpp"
#include "citykpi/models/logistic.hpp"

namespace citykpi {

std::array<double, 2> BernoulliNbModel::JointLogLikelihood(
    std::span<const double> x) const {
  if (x.size() != log_theta[0].size()) {
    throw Error(ErrorCode::kWidthMismatch, "naive Bayes model width mismatch");
  }
  std::array<double, 2> joint = log_prior;
  for (int c = 0; c < 2; ++c) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      joint[c] += x[j] > binarize_threshold ? log_theta[c][j]
                                            : log_one_minus_theta[c][j];
    }
  }
  return joint;
}

std::array<double, 2> BernoulliNbModel::Posterior(
    std::span<const double> x) const {
  const auto joint = JointLogLikelihood(x);
  // Normalizing two log-joints: P(1|x) = sigmoid(l1 - l0).
  const double p1 = Sigmoid(joint[1] - joint[0]);
  return {1.0 - p1, p1};
}

double BernoulliNbModel::Probability(std::span<const double> x) const {
  return Posterior(x)[1];
}

BernoulliNbModel BernoulliNbFit(const FeatureMatrix& x, const LabelVector& y,
                                const BernoulliNbConfig& config) {
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch, "X and y differ in length");
  }
  if (!(config.alpha > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must be positive");
  }
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  std::array<std::size_t, 2> class_count{y.count(0), y.count(1)};
  if (class_count[0] == 0 || class_count[1] == 0) {
    throw Error(ErrorCode::kSingleClass,
                "naive Bayes needs samples of both classes");
  }

  std::array<std::vector<double>, 2> ones;
  ones[0].assign(p, 0.0);
  ones[1].assign(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = x.row(i);
    for (std::size_t j = 0; j < p; ++j) {
      if (row[j] > config.binarize_threshold) ones[y[i]][j] += 1.0;
    }
  }

  BernoulliNbModel model;
  model.binarize_threshold = config.binarize_threshold;
  for (int c = 0; c < 2; ++c) {
    const double nc = static_cast<double>(class_count[c]);
    model.log_prior[c] = std::log(nc / static_cast<double>(n));
    model.log_theta[c].resize(p);
    model.log_one_minus_theta[c].resize(p);
    for (std::size_t j = 0; j < p; ++j) {
      const double denom = nc + 2.0 * config.alpha;
      model.log_theta[c][j] = std::log((ones[c][j] + config.alpha) / denom);
      model.log_one_minus_theta[c][j] =
          std::log((nc - ones[c][j] + config.alpha) / denom);
    }
  }
  return model;
}

}  // namespace citykpi
