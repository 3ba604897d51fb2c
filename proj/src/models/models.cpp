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

#include "citykpi/models.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

#include "citykpi/error.hpp"

namespace citykpi {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::size_t ParameterWidth(const ModelParameters& parameters) {
  return std::visit(
      Overloaded{
          [](const LogisticModel& m) { return m.beta.size(); },
          [](const SvmModel& m) { return m.w.size(); },
          [](const TreeModel& m) { return m.num_features; },
          [](const BernoulliNbModel& m) { return m.log_theta[0].size(); },
          [](const AnnModel& m) { return m.inputs; },
      },
      parameters);
}

json TreeToJson(const TreeModel& tree) {
  json nodes = json::array();
  for (const TreeNode& node : tree.nodes) {
    json j = {{"leaf", node.is_leaf},
              {"label", node.label},
              {"class_counts", node.class_counts}};
    if (!node.is_leaf) {
      j["feature_index"] = node.feature_index;
      j["threshold"] = node.threshold;
      j["left"] = node.left;
      j["right"] = node.right;
    }
    nodes.push_back(std::move(j));
  }
  return {{"num_features", tree.num_features}, {"nodes", std::move(nodes)}};
}

TreeModel TreeFromJson(const json& j) {
  TreeModel tree;
  tree.num_features = j.at("num_features").get<std::size_t>();
  for (const json& n : j.at("nodes")) {
    TreeNode node;
    node.is_leaf = n.at("leaf").get<bool>();
    node.label = n.at("label").get<int>();
    node.class_counts = n.at("class_counts").get<std::array<std::size_t, 2>>();
    if (!node.is_leaf) {
      node.feature_index = n.at("feature_index").get<std::size_t>();
      node.threshold = n.at("threshold").get<double>();
      node.left = n.at("left").get<std::size_t>();
      node.right = n.at("right").get<std::size_t>();
    }
    tree.nodes.push_back(node);
  }
  const std::size_t count = tree.nodes.size();
  if (count == 0) throw Error(ErrorCode::kMalformedInput, "tree has no nodes");
  for (std::size_t i = 0; i < count; ++i) {
    const TreeNode& node = tree.nodes[i];
    if (node.is_leaf) continue;
    if (node.left <= i || node.right <= i || node.left >= count ||
        node.right >= count || node.feature_index >= tree.num_features) {
      throw Error(ErrorCode::kMalformedInput, "tree node links are invalid");
    }
  }
  return tree;
}

}  // namespace

ModelKind KindOf(const ModelParameters& parameters) {
  return std::visit(
      Overloaded{
          [](const LogisticModel&) { return ModelKind::kLogReg; },
          [](const SvmModel&) { return ModelKind::kSvm; },
          [](const TreeModel&) { return ModelKind::kTree; },
          [](const BernoulliNbModel&) { return ModelKind::kBernoulliNb; },
          [](const AnnModel&) { return ModelKind::kAnn; },
      },
      parameters);
}

ModelParameters FitModel(ModelKind kind, const FeatureMatrix& x,
                         const LabelVector& y, const TrainConfig& config) {
  switch (kind) {
    case ModelKind::kLogReg: return LogisticFit(x, y, config.logreg);
    case ModelKind::kSvm: return SvmFit(x, y, config.svm);
    case ModelKind::kTree: return TreeFit(x, y, config.tree);
    case ModelKind::kBernoulliNb: return BernoulliNbFit(x, y, config.bnb);
    case ModelKind::kAnn: return AnnFit(x, y, config.ann);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown model kind");
}

double ScoreProbability(const ModelParameters& parameters,
                        std::span<const double> x) {
  return std::visit(
      Overloaded{
          [&](const SvmModel& m) { return Sigmoid(m.Score(x)); },
          [&](const auto& m) { return m.Probability(x); },
      },
      parameters);
}

int Predict(const ModelParameters& parameters, std::span<const double> x,
            double threshold) {
  return PredictFromProbability(ScoreProbability(parameters, x), threshold);
}

double TrainedModel::Probability(std::span<const double> raw_x) const {
  const auto scaled = scaler.Apply(raw_x);
  return ScoreProbability(parameters, scaled);
}

int TrainedModel::Predict(std::span<const double> raw_x,
                          double threshold) const {
  return PredictFromProbability(Probability(raw_x), threshold);
}

void TrainedModel::CheckConsistent() const {
  const std::size_t width = feature_names.size();
  if (KindOf(parameters) != kind) {
    throw Error(ErrorCode::kInvalidArgument, "model kind does not match parameters");
  }
  if (ParameterWidth(parameters) != width || scaler.means.size() != width ||
      scaler.stds.size() != width) {
    throw Error(ErrorCode::kInvalidArgument,
                "model, scaler and feature names disagree on width");
  }
}

json ParametersToJson(const ModelParameters& parameters) {
  return std::visit(
      Overloaded{
          [](const LogisticModel& m) -> json {
            return {{"beta0", m.beta0}, {"beta", m.beta}};
          },
          [](const SvmModel& m) -> json {
            return {{"w", m.w}, {"b", m.b}, {"c", m.c}, {"norm", m.Norm()}};
          },
          [](const TreeModel& m) -> json { return TreeToJson(m); },
          [](const BernoulliNbModel& m) -> json {
            return {{"log_prior", m.log_prior},
                    {"log_theta", m.log_theta},
                    {"log_one_minus_theta", m.log_one_minus_theta},
                    {"binarize_threshold", m.binarize_threshold}};
          },
          [](const AnnModel& m) -> json {
            return {{"inputs", m.inputs},
                    {"hidden", m.hidden},
                    {"hidden_activation", "relu"},
                    {"output_activation", "sigmoid"},
                    {"hidden_weights", m.hidden_weights},
                    {"hidden_bias", m.hidden_bias},
                    {"output_weights", m.output_weights},
                    {"output_bias", m.output_bias}};
          },
      },
      parameters);
}

ModelParameters ParametersFromJson(ModelKind kind, const json& j) {
  try {
    switch (kind) {
      case ModelKind::kLogReg: {
        LogisticModel m;
        m.beta0 = j.at("beta0").get<double>();
        m.beta = j.at("beta").get<std::vector<double>>();
        return m;
      }
      case ModelKind::kSvm: {
        SvmModel m;
        m.w = j.at("w").get<std::vector<double>>();
        m.b = j.at("b").get<double>();
        m.c = j.at("c").get<double>();
        return m;
      }
      case ModelKind::kTree:
        return TreeFromJson(j);
      case ModelKind::kBernoulliNb: {
        BernoulliNbModel m;
        m.log_prior = j.at("log_prior").get<std::array<double, 2>>();
        m.log_theta =
            j.at("log_theta").get<std::array<std::vector<double>, 2>>();
        m.log_one_minus_theta =
            j.at("log_one_minus_theta")
                .get<std::array<std::vector<double>, 2>>();
        m.binarize_threshold = j.at("binarize_threshold").get<double>();
        return m;
      }
      case ModelKind::kAnn: {
        AnnModel m;
        m.inputs = j.at("inputs").get<std::size_t>();
        m.hidden = j.at("hidden").get<std::size_t>();
        m.hidden_weights = j.at("hidden_weights").get<std::vector<double>>();
        m.hidden_bias = j.at("hidden_bias").get<std::vector<double>>();
        m.output_weights = j.at("output_weights").get<std::vector<double>>();
        m.output_bias = j.at("output_bias").get<double>();
        if (m.hidden_weights.size() != m.inputs * m.hidden ||
            m.hidden_bias.size() != m.hidden ||
            m.output_weights.size() != m.hidden) {
          throw Error(ErrorCode::kMalformedInput, "ANN weight shapes do not chain");
        }
        return m;
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedInput,
                "bad model parameters: " + std::string(e.what()));
  }
  throw Error(ErrorCode::kMalformedInput, "unknown model kind");
}

json TrainedModelToJson(const TrainedModel& model) {
  return {{"kind", ModelKindName(model.kind)},
          {"parameters", ParametersToJson(model.parameters)},
          {"scaler", ScalerToJson(model.scaler)},
          {"feature_names", model.feature_names},
          {"training_config", TrainConfigToJson(model.training_config)},
          {"trained_at", model.trained_at}};
}

TrainedModel TrainedModelFromJson(const json& j) {
  TrainedModel model;
  try {
    model.kind = ParseModelKind(j.at("kind").get<std::string>());
    model.parameters = ParametersFromJson(model.kind, j.at("parameters"));
    model.scaler = ScalerFromJson(j.at("scaler"));
    model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    model.training_config = TrainConfigFromJson(j.at("training_config"));
    model.trained_at = j.value("trained_at", "");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedInput,
                "bad trained model JSON: " + std::string(e.what()));
  }
  model.CheckConsistent();
  return model;
}

std::string CurrentUtcTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

}  // namespace citykpi
