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

// The five governance classifiers behind one contract, and the persisted
// TrainedModel artifact that bundles a fitted model with its scaler.

#ifndef CITYKPI_MODELS_HPP_
#define CITYKPI_MODELS_HPP_

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "citykpi/dataset.hpp"
#include "citykpi/models/ann.hpp"
#include "citykpi/models/logistic.hpp"
#include "citykpi/models/naive_bayes.hpp"
#include "citykpi/models/svm.hpp"
#include "citykpi/models/tree.hpp"
#include "citykpi/preprocess.hpp"
#include "citykpi/train_config.hpp"
#include "json.hpp"

namespace citykpi {

using ModelParameters = std::variant<LogisticModel, SvmModel, TreeModel,
                                     BernoulliNbModel, AnnModel>;

ModelKind KindOf(const ModelParameters& parameters);

// Fits one classifier on already-standardized features.
ModelParameters FitModel(ModelKind kind, const FeatureMatrix& x,
                         const LabelVector& y, const TrainConfig& config);

// Probability-like score in [0, 1] for a standardized feature vector. The SVM
// margin is mapped through the sigmoid.
double ScoreProbability(const ModelParameters& parameters,
                        std::span<const double> x);

// Class 1 iff probability >= threshold.
inline int PredictFromProbability(double probability, double threshold) {
  return probability >= threshold ? 1 : 0;
}

int Predict(const ModelParameters& parameters, std::span<const double> x,
            double threshold);

struct TrainedModel {
  ModelKind kind = ModelKind::kLogReg;
  ModelParameters parameters;
  Scaler scaler;
  std::vector<std::string> feature_names;
  std::string trained_at;  // ISO-8601 UTC
  TrainConfig training_config;

  // Both take raw (unscaled) feature vectors.
  double Probability(std::span<const double> raw_x) const;
  int Predict(std::span<const double> raw_x, double threshold) const;

  // Throws kInvalidArgument when parameter, scaler and name widths disagree.
  void CheckConsistent() const;

  bool operator==(const TrainedModel&) const = default;
};

nlohmann::json ParametersToJson(const ModelParameters& parameters);
ModelParameters ParametersFromJson(ModelKind kind, const nlohmann::json& json);

// {"kind","parameters","scaler","feature_names","training_config","trained_at"}
nlohmann::json TrainedModelToJson(const TrainedModel& model);
TrainedModel TrainedModelFromJson(const nlohmann::json& json);

std::string CurrentUtcTimestamp();

}  // namespace citykpi

#endif  // CITYKPI_MODELS_HPP_
