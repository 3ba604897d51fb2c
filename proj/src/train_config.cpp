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

#include "citykpi/train_config.hpp"

#include <cmath>
#include <string>

#include "citykpi/error.hpp"

namespace citykpi {
namespace {

using nlohmann::json;

[[noreturn]] void Invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, message);
}

double ReadReal(const json& value, const std::string& key) {
  if (!value.is_number()) Invalid("'" + key + "' must be a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) Invalid("'" + key + "' must be finite");
  return v;
}

int ReadInt(const json& value, const std::string& key) {
  if (!value.is_number_integer()) Invalid("'" + key + "' must be an integer");
  const auto v = value.get<std::int64_t>();
  if (v < -1'000'000'000 || v > 1'000'000'000) {
    Invalid("'" + key + "' is out of range");
  }
  return static_cast<int>(v);
}

std::uint64_t ReadSeed(const json& value, const std::string& key) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer() && value.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(value.get<std::int64_t>());
  }
  Invalid("'" + key + "' must be a non-negative integer");
}

std::optional<int> ReadOptionalInt(const json& value, const std::string& key) {
  if (value.is_null()) return std::nullopt;
  return ReadInt(value, key);
}

template <typename Fn>
void ForEachField(const json& object, const std::string& section, Fn&& fn) {
  if (!object.is_object()) Invalid("'" + section + "' must be an object");
  for (auto it = object.begin(); it != object.end(); ++it) {
    if (!fn(it.key(), it.value())) {
      Invalid("unknown " + section + " hyperparameter '" + it.key() + "'");
    }
  }
}

bool ApplyLogistic(LogisticConfig& c, const std::string& k, const json& v) {
  if (k == "learning_rate") c.learning_rate = ReadReal(v, k);
  else if (k == "iterations") c.iterations = ReadInt(v, k);
  else return false;
  return true;
}

bool ApplySvm(SvmConfig& c, const std::string& k, const json& v) {
  if (k == "c") c.c = ReadReal(v, k);
  else if (k == "epochs") c.epochs = ReadInt(v, k);
  else return false;
  return true;
}

bool ApplyTree(TreeConfig& c, const std::string& k, const json& v) {
  if (k == "max_depth") c.max_depth = ReadOptionalInt(v, k);
  else if (k == "min_samples_split") c.min_samples_split = ReadInt(v, k);
  else return false;
  return true;
}

bool ApplyBnb(BernoulliNbConfig& c, const std::string& k, const json& v) {
  if (k == "alpha") c.alpha = ReadReal(v, k);
  else if (k == "binarize_threshold") c.binarize_threshold = ReadReal(v, k);
  else return false;
  return true;
}

bool ApplyAdam(AdamConfig& c, const std::string& k, const json& v) {
  if (k == "learning_rate") c.learning_rate = ReadReal(v, k);
  else if (k == "beta1") c.beta1 = ReadReal(v, k);
  else if (k == "beta2") c.beta2 = ReadReal(v, k);
  else if (k == "epsilon") c.epsilon = ReadReal(v, k);
  else if (k == "epochs") c.epochs = ReadInt(v, k);
  else if (k == "init_seed") c.init_seed = ReadSeed(v, k);
  else return false;
  return true;
}

bool ApplyAnn(AnnConfig& c, const std::string& k, const json& v) {
  if (k == "hidden_units") {
    c.hidden_units = ReadInt(v, k);
    return true;
  }
  if (k == "adam") {
    ForEachField(v, "adam", [&](const std::string& key, const json& value) {
      return ApplyAdam(c.adam, key, value);
    });
    return true;
  }
  return ApplyAdam(c.adam, k, v);
}

}  // namespace

std::string_view ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLogReg: return "logreg";
    case ModelKind::kSvm: return "svm";
    case ModelKind::kTree: return "tree";
    case ModelKind::kBernoulliNb: return "bnb";
    case ModelKind::kAnn: return "ann";
  }
  return "unknown";
}

ModelKind ParseModelKind(std::string_view name) {
  for (ModelKind kind : kAllModelKinds) {
    if (ModelKindName(kind) == name) return kind;
  }
  Invalid("unknown model kind '" + std::string(name) + "'");
}

void TrainConfig::Validate() const {
  if (!(logreg.learning_rate > 0.0)) Invalid("logreg.learning_rate must be > 0");
  if (logreg.iterations < 1) Invalid("logreg.iterations must be >= 1");
  if (!(svm.c > 0.0)) Invalid("svm.c must be > 0");
  if (svm.epochs < 1) Invalid("svm.epochs must be >= 1");
  if (tree.max_depth && *tree.max_depth < 0) {
    Invalid("tree.max_depth must be >= 0");
  }
  if (tree.min_samples_split < 2) Invalid("tree.min_samples_split must be >= 2");
  if (!(bnb.alpha > 0.0)) Invalid("bnb.alpha must be > 0");
  if (ann.hidden_units < 1) Invalid("ann.hidden_units must be >= 1");
  const AdamConfig& adam = ann.adam;
  if (!(adam.learning_rate > 0.0)) Invalid("ann.learning_rate must be > 0");
  if (!(adam.beta1 > 0.0 && adam.beta1 < 1.0)) Invalid("ann.beta1 must be in (0,1)");
  if (!(adam.beta2 > 0.0 && adam.beta2 < 1.0)) Invalid("ann.beta2 must be in (0,1)");
  if (!(adam.epsilon > 0.0)) Invalid("ann.epsilon must be > 0");
  if (adam.epochs < 1) Invalid("ann.epochs must be >= 1");
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    Invalid("threshold must be in [0,1]");
  }
}

json TrainConfigToJson(const TrainConfig& config) {
  const AdamConfig& adam = config.ann.adam;
  return {
      {"threshold", config.threshold},
      {"logreg",
       {{"learning_rate", config.logreg.learning_rate},
        {"iterations", config.logreg.iterations}}},
      {"svm", {{"c", config.svm.c}, {"epochs", config.svm.epochs}}},
      {"tree",
       {{"max_depth", config.tree.max_depth ? json(*config.tree.max_depth)
                                            : json(nullptr)},
        {"min_samples_split", config.tree.min_samples_split}}},
      {"bnb",
       {{"alpha", config.bnb.alpha},
        {"binarize_threshold", config.bnb.binarize_threshold}}},
      {"ann",
       {{"hidden_units", config.ann.hidden_units},
        {"adam",
         {{"learning_rate", adam.learning_rate},
          {"beta1", adam.beta1},
          {"beta2", adam.beta2},
          {"epsilon", adam.epsilon},
          {"epochs", adam.epochs},
          {"init_seed", adam.init_seed}}}}},
  };
}

TrainConfig TrainConfigFromJson(const json& j) {
  TrainConfig config;
  ForEachField(j, "training_config", [&](const std::string& key,
                                         const json& value) {
    if (key == "threshold") {
      config.threshold = ReadReal(value, key);
    } else if (key == "logreg") {
      ForEachField(value, key, [&](const std::string& k, const json& v) {
        return ApplyLogistic(config.logreg, k, v);
      });
    } else if (key == "svm") {
      ForEachField(value, key, [&](const std::string& k, const json& v) {
        return ApplySvm(config.svm, k, v);
      });
    } else if (key == "tree") {
      ForEachField(value, key, [&](const std::string& k, const json& v) {
        return ApplyTree(config.tree, k, v);
      });
    } else if (key == "bnb") {
      ForEachField(value, key, [&](const std::string& k, const json& v) {
        return ApplyBnb(config.bnb, k, v);
      });
    } else if (key == "ann") {
      ForEachField(value, key, [&](const std::string& k, const json& v) {
        return ApplyAnn(config.ann, k, v);
      });
    } else {
      return false;
    }
    return true;
  });
  return config;
}

TrainConfig WithHyperparameters(TrainConfig config, ModelKind kind,
                                const json& hyperparameters) {
  if (hyperparameters.is_null()) return config;
  ForEachField(hyperparameters, std::string(ModelKindName(kind)),
               [&](const std::string& k, const json& v) {
                 if (k == "threshold") {
                   config.threshold = ReadReal(v, k);
                   return true;
                 }
                 switch (kind) {
                   case ModelKind::kLogReg: return ApplyLogistic(config.logreg, k, v);
                   case ModelKind::kSvm: return ApplySvm(config.svm, k, v);
                   case ModelKind::kTree: return ApplyTree(config.tree, k, v);
                   case ModelKind::kBernoulliNb: return ApplyBnb(config.bnb, k, v);
                   case ModelKind::kAnn: return ApplyAnn(config.ann, k, v);
                 }
                 return false;
               });
  return config;
}

}  // namespace citykpi
