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

#ifndef CITYKPI_MODELS_SVM_HPP_
#define CITYKPI_MODELS_SVM_HPP_

#include <span>
#include <vector>

#include "citykpi/dataset.hpp"
#include "citykpi/train_config.hpp"

namespace citykpi {

// Linear soft-margin SVM. Labels {0,1} are treated as {-1,+1}.
struct SvmModel {
  std::vector<double> w;
  double b = 0.0;
  double c = 1.0;

  // w^T x + b. Positive means class 1; a score of exactly 0 is class 1.
  double Score(std::span<const double> x) const;
  double Norm() const;

  bool operator==(const SvmModel&) const = default;
};

// max(0, 1 - y * score) with y in {-1, +1}.
double HingeLoss(int signed_label, double score);

struct SvmObjective {
  double regularization = 0.0;  // (1/2) ||w||^2
  double hinge_sum = 0.0;       // sum of hinge losses
  double total = 0.0;           // regularization + c * hinge_sum
};

SvmObjective EvaluateSvmObjective(const FeatureMatrix& x, const LabelVector& y,
                                  const SvmModel& model);

// Pegasos-style subgradient descent on
//   (1/2)||w||^2 + c * sum_i max(0, 1 - y_i (w^T x_i + b))
// rescaled by lambda = 1/(c n); step 1/(lambda t), samples in index order.
// When `objective_history` is given it receives the objective after every
// epoch.
SvmModel SvmFit(const FeatureMatrix& x, const LabelVector& y,
                const SvmConfig& config,
                std::vector<double>* objective_history = nullptr);

}  // namespace citykpi

#endif  // CITYKPI_MODELS_SVM_HPP_
