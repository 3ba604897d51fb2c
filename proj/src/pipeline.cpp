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

#include "citykpi/pipeline.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <future>
#include <sstream>

#include "citykpi/error.hpp"

namespace citykpi {
namespace {

using nlohmann::json;

std::uint64_t Fnv1a(std::string_view bytes,
                    std::uint64_t hash = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string Hex16(std::uint64_t value) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016" PRIx64, value);
  return buffer;
}

json SplitToJson(const Split& split) {
  return {{"seed", split.seed},
          {"test_fraction", split.test_fraction},
          {"train_indices", split.train_indices},
          {"test_indices", split.test_indices}};
}

Split SplitFromJson(const json& j) {
  Split split;
  split.seed = j.at("seed").get<std::uint64_t>();
  split.test_fraction = j.at("test_fraction").get<double>();
  split.train_indices = j.at("train_indices").get<std::vector<std::size_t>>();
  split.test_indices = j.at("test_indices").get<std::vector<std::size_t>>();
  return split;
}

}  // namespace

PreparedData PrepareData(const Dataset& dataset, double test_fraction,
                         std::uint64_t seed) {
  const Dataset clean = DropMissing(dataset);
  auto [x, y] = SplitXY(clean);
  Split split = TrainTestSplit(x, y, test_fraction, seed);
  FeatureMatrix x_train_raw = x.SelectRows(split.train_indices);
  FeatureMatrix x_test_raw = x.SelectRows(split.test_indices);
  Scaler scaler = StandardizeFit(x_train_raw);
  FeatureMatrix x_train = StandardizeApply(scaler, x_train_raw);
  FeatureMatrix x_test = StandardizeApply(scaler, x_test_raw);
  LabelVector y_train = y.SelectRows(split.train_indices);
  LabelVector y_test = y.SelectRows(split.test_indices);
  return PreparedData{std::move(split),      std::move(scaler),
                      std::move(x_train),    std::move(x_test),
                      std::move(x_test_raw), std::move(y_train),
                      std::move(y_test),     clean.row_count()};
}

TrainingRun TrainAndEvaluate(const PreparedData& data, ModelKind kind,
                             const TrainConfig& config,
                             const std::string& dataset_hash) {
  config.Validate();
  TrainingRun run;
  run.dataset_hash = dataset_hash;
  run.split = data.split;
  run.model.kind = kind;
  run.model.parameters = FitModel(kind, data.x_train, data.y_train, config);
  run.model.scaler = data.scaler;
  run.model.feature_names = data.x_train.feature_names();
  run.model.training_config = config;
  run.model.trained_at = CurrentUtcTimestamp();
  run.model.CheckConsistent();

  run.test_labels = data.y_test.labels();
  for (std::size_t i = 0; i < data.x_test.rows(); ++i) {
    const auto raw = data.x_test_raw.row(i);
    run.test_features.emplace_back(raw.begin(), raw.end());
    run.test_scores.push_back(ScoreProbability(run.model.parameters,
                                               data.x_test.row(i)));
  }
  run.evaluation = Evaluate(run.test_labels, run.test_scores, config.threshold);
  run.id = MakeModelId(kind, data.split.seed, data.split.test_fraction,
                       dataset_hash, config);
  return run;
}

std::string DatasetHash(const Dataset& dataset) {
  return Hex16(Fnv1a(DatasetToJson(dataset).dump()));
}

std::string MakeModelId(ModelKind kind, std::uint64_t seed, double test_fraction,
                        const std::string& dataset_hash,
                        const TrainConfig& config) {
  const json key = {{"dataset", dataset_hash},
                    {"test_fraction", test_fraction},
                    {"config", TrainConfigToJson(config)}};
  return std::string(ModelKindName(kind)) + "-" + std::to_string(seed) + "-" +
         Hex16(Fnv1a(key.dump()));
}

json TrainingRunToJson(const TrainingRun& run) {
  json j = TrainedModelToJson(run.model);
  j["id"] = run.id;
  j["dataset_hash"] = run.dataset_hash;
  j["split"] = SplitToJson(run.split);
  j["test_set"] = {{"features", run.test_features},
                   {"labels", run.test_labels},
                   {"scores", run.test_scores}};
  j["evaluation"] = EvaluationToJson(run.evaluation);
  return j;
}

TrainingRun TrainingRunFromJson(const json& j) {
  TrainingRun run;
  run.model = TrainedModelFromJson(j);
  try {
    run.id = j.at("id").get<std::string>();
    run.dataset_hash = j.value("dataset_hash", "");
    run.split = SplitFromJson(j.at("split"));
    const json& test = j.at("test_set");
    run.test_features =
        test.at("features").get<std::vector<std::vector<double>>>();
    run.test_labels = test.at("labels").get<std::vector<int>>();
    run.test_scores = test.at("scores").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedInput,
                "bad model record: " + std::string(e.what()));
  }
  if (run.test_labels.size() != run.test_scores.size() ||
      run.test_features.size() != run.test_scores.size()) {
    throw Error(ErrorCode::kMalformedInput, "model record test set is ragged");
  }
  run.evaluation = Evaluate(run.test_labels, run.test_scores,
                            run.model.training_config.threshold);
  return run;
}

Comparison CompareModels(const Dataset& dataset, std::uint64_t seed,
                         double test_fraction, const TrainConfig& config,
                         bool parallel) {
  config.Validate();
  const Dataset clean = DropMissing(dataset);
  if (clean.row_count() < kMinCompareRows) {
    throw Error(ErrorCode::kTooFewRows,
                "comparison needs at least " + std::to_string(kMinCompareRows) +
                    " complete rows, found " +
                    std::to_string(clean.row_count()));
  }
  const PreparedData data = PrepareData(clean, test_fraction, seed);

  auto run_one = [&](ModelKind kind) {
    return TrainAndEvaluate(data, kind, config);
  };
  std::vector<TrainingRun> runs;
  if (parallel) {
    std::vector<std::future<TrainingRun>> futures;
    for (ModelKind kind : kAllModelKinds) {
      futures.push_back(std::async(std::launch::async, run_one, kind));
    }
    for (auto& f : futures) runs.push_back(f.get());
  } else {
    for (ModelKind kind : kAllModelKinds) runs.push_back(run_one(kind));
  }

  Comparison cmp;
  cmp.seed = seed;
  cmp.test_fraction = test_fraction;
  cmp.clean_rows = data.clean_rows;
  cmp.train_size = data.split.train_indices.size();
  cmp.test_size = data.split.test_indices.size();
  double best = -1.0;
  for (const TrainingRun& run : runs) {
    ComparisonRow row;
    row.kind = run.model.kind;
    row.accuracy = run.evaluation.report.accuracy;
    row.precision = run.evaluation.report.per_class[1].precision;
    row.log_loss = run.evaluation.log_loss;
    if (run.evaluation.roc) row.auc = run.evaluation.roc->auc;
    cmp.rows.push_back(row);
    best = std::max(best, row.accuracy);
  }
  for (const ComparisonRow& row : cmp.rows) {
    if (row.accuracy == best) cmp.best.push_back(row.kind);
  }
  return cmp;
}

json ComparisonToJson(const Comparison& cmp) {
  json rows = json::array();
  for (const ComparisonRow& row : cmp.rows) {
    rows.push_back({{"model", ModelKindName(row.kind)},
                    {"accuracy", row.accuracy},
                    {"precision", row.precision},
                    {"log_loss", row.log_loss},
                    {"auc", row.auc ? json(*row.auc) : json(nullptr)}});
  }
  json best = json::array();
  for (ModelKind kind : cmp.best) best.push_back(ModelKindName(kind));
  return {{"seed", cmp.seed},
          {"test_fraction", cmp.test_fraction},
          {"clean_rows", cmp.clean_rows},
          {"train_size", cmp.train_size},
          {"test_size", cmp.test_size},
          {"models", std::move(rows)},
          {"best", std::move(best)}};
}

std::string FormatComparisonTable(const Comparison& cmp) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line),
                "rows=%zu train=%zu test=%zu seed=%" PRIu64 " test_fraction=%g\n",
                cmp.clean_rows, cmp.train_size, cmp.test_size, cmp.seed,
                cmp.test_fraction);
  out << line;
  std::snprintf(line, sizeof(line), "%-8s %10s %10s %10s %10s\n", "model",
                "accuracy", "precision", "log_loss", "auc");
  out << line;
  for (const ComparisonRow& row : cmp.rows) {
    char auc[32] = "n/a";
    if (row.auc) std::snprintf(auc, sizeof(auc), "%.6f", *row.auc);
    std::snprintf(line, sizeof(line), "%-8s %10.6f %10.6f %10.6f %10s\n",
                  std::string(ModelKindName(row.kind)).c_str(), row.accuracy,
                  row.precision, row.log_loss, auc);
    out << line;
  }
  out << "best:";
  for (ModelKind kind : cmp.best) out << ' ' << ModelKindName(kind);
  out << '\n';
  return out.str();
}

}  // namespace citykpi
