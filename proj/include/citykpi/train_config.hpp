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

#ifndef CITYKPI_TRAIN_CONFIG_HPP_
#define CITYKPI_TRAIN_CONFIG_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "json.hpp"

namespace citykpi {

enum class ModelKind { kLogReg, kSvm, kTree, kBernoulliNb, kAnn };

inline constexpr std::array<ModelKind, 5> kAllModelKinds = {
    ModelKind::kLogReg, ModelKind::kSvm, ModelKind::kTree,
    ModelKind::kBernoulliNb, ModelKind::kAnn};

// "logreg", "svm", "tree", "bnb", "ann".
std::string_view ModelKindName(ModelKind kind);
ModelKind ParseModelKind(std::string_view name);

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int epochs = 500;
  std::uint64_t init_seed = 0;

  bool operator==(const AdamConfig&) const = default;
};

struct LogisticConfig {
  double learning_rate = 0.1;
  int iterations = 1000;

  bool operator==(const LogisticConfig&) const = default;
};

struct SvmConfig {
  double c = 1.0;
  int epochs = 200;

  bool operator==(const SvmConfig&) const = default;
};

struct TreeConfig {
  std::optional<int> max_depth;  // unlimited when absent
  int min_samples_split = 2;

  bool operator==(const TreeConfig&) const = default;
};

struct BernoulliNbConfig {
  double alpha = 1.0;
  double binarize_threshold = 0.0;

  bool operator==(const BernoulliNbConfig&) const = default;
};

struct AnnConfig {
  int hidden_units = 8;
  AdamConfig adam;

  bool operator==(const AnnConfig&) const = default;
};

struct TrainConfig {
  LogisticConfig logreg;
  SvmConfig svm;
  TreeConfig tree;
  BernoulliNbConfig bnb;
  AnnConfig ann;
  double threshold = 0.5;

  // Throws kInvalidArgument naming the first offending field.
  void Validate() const;

  bool operator==(const TrainConfig&) const = default;
};

nlohmann::json TrainConfigToJson(const TrainConfig& config);
// Missing fields keep their defaults.
TrainConfig TrainConfigFromJson(const nlohmann::json& json);

// Applies a flat hyperparameter object (e.g. {"learning_rate": 0.05}) to the
// section of `config` that belongs to `kind`. Unknown keys are rejected.
TrainConfig WithHyperparameters(TrainConfig config, ModelKind kind,
                                const nlohmann::json& hyperparameters);

}  // namespace citykpi

#endif  // CITYKPI_TRAIN_CONFIG_HPP_
