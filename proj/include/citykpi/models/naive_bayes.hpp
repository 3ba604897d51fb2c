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

#ifndef CITYKPI_MODELS_NAIVE_BAYES_HPP_
#define CITYKPI_MODELS_NAIVE_BAYES_HPP_

#include <array>
#include <span>
#include <vector>

#include "citykpi/dataset.hpp"
#include "citykpi/train_config.hpp"

namespace citykpi {

// Bernoulli naive Bayes over features binarized as x > binarize_threshold.
struct BernoulliNbModel {
  std::array<double, 2> log_prior{0.0, 0.0};
  // log P(feature_j = 1 | class) and log P(feature_j = 0 | class).
  std::array<std::vector<double>, 2> log_theta;
  std::array<std::vector<double>, 2> log_one_minus_theta;
  double binarize_threshold = 0.0;

  std::array<double, 2> JointLogLikelihood(std::span<const double> x) const;
  // P(class | x) for classes 0 and 1.
  std::array<double, 2> Posterior(std::span<const double> x) const;
  double Probability(std::span<const double> x) const;

  bool operator==(const BernoulliNbModel&) const = default;
};

// theta = (count + alpha) / (n_c + 2 alpha), prior = n_c / n.
// Throws kSingleClass if y holds only one class.
BernoulliNbModel BernoulliNbFit(const FeatureMatrix& x, const LabelVector& y,
                                const BernoulliNbConfig& config);

}  // namespace citykpi

#endif  // CITYKPI_MODELS_NAIVE_BAYES_HPP_
