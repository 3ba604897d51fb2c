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

// Logistic regression trained by full-batch gradient descent on the mean
// negative log-likelihood.

#ifndef CITYKPI_MODELS_LOGISTIC_HPP_
#define CITYKPI_MODELS_LOGISTIC_HPP_

#include <span>
#include <vector>

#include "citykpi/dataset.hpp"
#include "citykpi/train_config.hpp"

namespace citykpi {

// 1 / (1 + exp(-z)), evaluated without overflow for any finite z.
double Sigmoid(double z);

// log(1 + exp(z)), evaluated without overflow.
double Softplus(double z);

struct LogisticModel {
  double beta0 = 0.0;
  std::vector<double> beta;

  double Logit(std::span<const double> x) const;
  double Probability(std::span<const double> x) const;

  bool operator==(const LogisticModel&) const = default;
};

struct LogisticGradient {
  double loss = 0.0;
  double d_beta0 = 0.0;
  std::vector<double> d_beta;
};

// Mean negative log-likelihood.
double LogisticLoss(const FeatureMatrix& x, const LabelVector& y,
                    const LogisticModel& model);
// Loss together with (1/n) X^T (sigma(X beta + beta0) - y) and its intercept
// counterpart.
LogisticGradient LogisticLossGradient(const FeatureMatrix& x,
                                      const LabelVector& y,
                                      const LogisticModel& model);

// Starts from beta = 0. Throws kNonFinite if the loss diverges.
LogisticModel LogisticFit(const FeatureMatrix& x, const LabelVector& y,
                          const LogisticConfig& config);

}  // namespace citykpi

#endif  // CITYKPI_MODELS_LOGISTIC_HPP_
