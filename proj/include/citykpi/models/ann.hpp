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

// Single-hidden-layer network: p inputs -> h ReLU units -> 1 sigmoid output,
// trained with full-batch Adam on binary cross-entropy.

#ifndef CITYKPI_MODELS_ANN_HPP_
#define CITYKPI_MODELS_ANN_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "citykpi/dataset.hpp"
#include "citykpi/train_config.hpp"

namespace citykpi {

struct AnnModel {
  std::size_t inputs = 0;
  std::size_t hidden = 0;
  std::vector<double> hidden_weights;  // hidden x inputs, row-major
  std::vector<double> hidden_bias;     // hidden
  std::vector<double> output_weights;  // hidden
  double output_bias = 0.0;

  double Logit(std::span<const double> x) const;
  double Probability(std::span<const double> x) const;

  bool operator==(const AnnModel&) const = default;
};

// Gradient of the mean loss, laid out exactly like AnnModel's parameters.
struct AnnGradient {
  double loss = 0.0;
  std::vector<double> hidden_weights;
  std::vector<double> hidden_bias;
  std::vector<double> output_weights;
  double output_bias = 0.0;
};

// Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)) drawn from one
// splitmix64 stream (hidden weights first, then output weights); zero biases.
AnnModel AnnInitialize(std::size_t inputs, std::size_t hidden,
                       std::uint64_t seed);

double AnnLoss(const FeatureMatrix& x, const LabelVector& y,
               const AnnModel& model);
AnnGradient AnnLossGradient(const FeatureMatrix& x, const LabelVector& y,
                            const AnnModel& model);

// Throws kNonFinite on divergence.
AnnModel AnnFit(const FeatureMatrix& x, const LabelVector& y,
                const AnnConfig& config);

}  // namespace citykpi

#endif  // CITYKPI_MODELS_ANN_HPP_
