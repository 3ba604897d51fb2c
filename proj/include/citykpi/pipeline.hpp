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

// End-to-end training: drop missing rows, split X/y, split train/test,
// standardize on the training rows, fit, and evaluate on the held-out rows.

#ifndef CITYKPI_PIPELINE_HPP_
#define CITYKPI_PIPELINE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "citykpi/dataset.hpp"
#include "citykpi/metrics.hpp"
#include "citykpi/models.hpp"
#include "citykpi/preprocess.hpp"
#include "json.hpp"

namespace citykpi {

struct PreparedData {
  Split split;
  Scaler scaler;
  FeatureMatrix x_train;  // standardized
  FeatureMatrix x_test;   // standardized with the training scaler
  FeatureMatrix x_test_raw;
  LabelVector y_train;
  LabelVector y_test;
  std::size_t clean_rows = 0;
};

PreparedData PrepareData(const Dataset& dataset, double test_fraction,
                         std::uint64_t seed);

// A trained model together with everything needed to re-evaluate it at any
// threshold without retraining.
struct TrainingRun {
  std::string id;
  std::string dataset_hash;
  TrainedModel model;
  Split split;
  std::vector<std::vector<double>> test_features;  // raw, one row per sample
  std::vector<int> test_labels;
  std::vector<double> test_scores;  // probabilities
  Evaluation evaluation;            // at training_config.threshold
};

TrainingRun TrainAndEvaluate(const PreparedData& data, ModelKind kind,
                             const TrainConfig& config,
                             const std::string& dataset_hash = "");

// FNV-1a 64 of the canonical dataset JSON, as 16 hex digits.
std::string DatasetHash(const Dataset& dataset);

// kind-seed-hash, where hash covers the dataset, split and configuration.
std::string MakeModelId(ModelKind kind, std::uint64_t seed, double test_fraction,
                        const std::string& dataset_hash,
                        const TrainConfig& config);

// TrainedModel JSON extended with "id", "dataset_hash", "split", "test_set"
// and "evaluation".
nlohmann::json TrainingRunToJson(const TrainingRun& run);
TrainingRun TrainingRunFromJson(const nlohmann::json& json);

struct ComparisonRow {
  ModelKind kind = ModelKind::kLogReg;
  double accuracy = 0.0;
  double precision = 0.0;  // class 1
  double log_loss = 0.0;
  std::optional<double> auc;
};

struct Comparison {
  std::uint64_t seed = 0;
  double test_fraction = 0.3;
  std::size_t clean_rows = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::vector<ComparisonRow> rows;
  std::vector<ModelKind> best;  // every kind with the maximal accuracy
};

inline constexpr std::size_t kMinCompareRows = 10;

// Trains all five kinds on one shared split. Throws kTooFewRows when fewer
// than kMinCompareRows complete rows remain.
Comparison CompareModels(const Dataset& dataset, std::uint64_t seed,
                         double test_fraction, const TrainConfig& config,
                         bool parallel = true);

nlohmann::json ComparisonToJson(const Comparison& comparison);
std::string FormatComparisonTable(const Comparison& comparison);

}  // namespace citykpi

#endif  // CITYKPI_PIPELINE_HPP_
