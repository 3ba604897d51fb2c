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

#include <gtest/gtest.h>

#include <sstream>

#include "citykpi/error.hpp"
#include "citykpi/pipeline.hpp"
#include "support.hpp"

namespace citykpi {
namespace {

TEST(PrepareData, ScalerSeesTrainingRowsOnly) {
  const Dataset d = testing::EdmontonLike(43, 6, 1);
  const PreparedData p = PrepareData(d, 0.3, 0);
  EXPECT_EQ(p.clean_rows, 43u);
  EXPECT_EQ(p.split.test_indices.size(), 13u);
  EXPECT_EQ(p.x_train.rows(), 30u);
  EXPECT_EQ(p.y_test.size(), 13u);
  const auto [x, y] = SplitXY(DropMissing(d));
  EXPECT_EQ(p.scaler, StandardizeFit(x.SelectRows(p.split.train_indices)));
  EXPECT_EQ(p.x_test_raw, x.SelectRows(p.split.test_indices));
  EXPECT_EQ(p.x_test, StandardizeApply(p.scaler, p.x_test_raw));
}

TEST(TrainAndEvaluate, ScoresMatchModel) {
  const Dataset d = testing::ToDataset(testing::DrawLogistic({}, 120, 3));
  const PreparedData p = PrepareData(d, 0.3, 4);
  const TrainingRun run =
      TrainAndEvaluate(p, ModelKind::kLogReg, TrainConfig{}, DatasetHash(d));
  ASSERT_EQ(run.test_scores.size(), 36u);
  for (std::size_t i = 0; i < run.test_scores.size(); ++i) {
    EXPECT_EQ(run.test_scores[i], run.model.Probability(run.test_features[i]));
  }
  EXPECT_EQ(run.evaluation.report,
            MakeReport(run.test_labels, ApplyThreshold(run.test_scores, 0.5)));
  EXPECT_EQ(run.id.rfind("logreg-4-", 0), 0u);
  EXPECT_EQ(run.dataset_hash, DatasetHash(d));
}

TEST(TrainingRunJson, RoundTrip) {
  const Dataset d = testing::ToDataset(testing::DrawLogistic({}, 60, 5));
  const PreparedData p = PrepareData(d, 0.3, 1);
  for (ModelKind kind : kAllModelKinds) {
    TrainConfig c;
    c.ann.adam.epochs = 40;
    const TrainingRun run = TrainAndEvaluate(p, kind, c, DatasetHash(d));
    const TrainingRun back =
        TrainingRunFromJson(nlohmann::json::parse(TrainingRunToJson(run).dump()));
    EXPECT_EQ(back.id, run.id);
    EXPECT_EQ(back.model, run.model);
    EXPECT_EQ(back.split, run.split);
    EXPECT_EQ(back.test_scores, run.test_scores);
    EXPECT_EQ(back.evaluation.report, run.evaluation.report);
    for (std::size_t i = 0; i < back.test_features.size(); ++i) {
      EXPECT_EQ(back.model.Predict(back.test_features[i], 0.5),
                run.model.Predict(run.test_features[i], 0.5));
    }
  }
}

TEST(DatasetHash, StableAndSensitive) {
  const Dataset a = testing::EdmontonHead();
  EXPECT_EQ(DatasetHash(a), DatasetHash(testing::EdmontonHead()));
  EXPECT_EQ(DatasetHash(a).size(), 16u);
  auto rows = a.rows();
  rows[0][0] = 7.2;
  EXPECT_NE(DatasetHash(a), DatasetHash(Dataset(a.schema(), rows)));
}

TEST(ModelId, DependsOnEveryInput) {
  const TrainConfig c;
  const std::string base = MakeModelId(ModelKind::kSvm, 1, 0.3, "abc", c);
  EXPECT_EQ(base, MakeModelId(ModelKind::kSvm, 1, 0.3, "abc", c));
  EXPECT_NE(base, MakeModelId(ModelKind::kSvm, 2, 0.3, "abc", c));
  EXPECT_NE(base, MakeModelId(ModelKind::kSvm, 1, 0.2, "abc", c));
  EXPECT_NE(base, MakeModelId(ModelKind::kSvm, 1, 0.3, "abd", c));
  TrainConfig other;
  other.svm.c = 2.0;
  EXPECT_NE(base, MakeModelId(ModelKind::kSvm, 1, 0.3, "abc", other));
}

TEST(CompareModels, FiveRowsSharedSplit) {
  const Dataset d = testing::EdmontonLike(43, 8, 2);
  const Comparison c = CompareModels(d, 0, 0.3, TrainConfig{});
  ASSERT_EQ(c.rows.size(), 5u);
  EXPECT_EQ(c.clean_rows, 43u);
  EXPECT_EQ(c.test_size, 13u);
  EXPECT_EQ(c.train_size, 30u);
  double best = 0.0;
  for (const auto& r : c.rows) best = std::max(best, r.accuracy);
  for (const auto& r : c.rows) {
    const bool listed = std::find(c.best.begin(), c.best.end(), r.kind) != c.best.end();
    EXPECT_EQ(listed, r.accuracy == best);
  }
}

TEST(CompareModels, ParallelEqualsSerialAndRepeatable) {
  const Dataset d = testing::ToDataset(testing::DrawLogistic({}, 150, 12));
  const auto a = ComparisonToJson(CompareModels(d, 7, 0.3, TrainConfig{}, true));
  const auto b = ComparisonToJson(CompareModels(d, 7, 0.3, TrainConfig{}, false));
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_EQ(a.dump(), ComparisonToJson(CompareModels(d, 7, 0.3, TrainConfig{})).dump());
}

TEST(CompareModels, TooFewRows) {
  const Dataset d = testing::ToDataset(testing::DrawSeparable(9, 2, 1));
  try {
    CompareModels(d, 0, 0.3, TrainConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooFewRows);
  }
}

TEST(CompareModels, SeparableDataAllPerfect) {
  const Dataset d = testing::ToDataset(testing::DrawAxisSeparable(200, 3, 5));
  const Comparison cmp = CompareModels(d, 0, 0.3, TrainConfig{});
  for (const auto& r : cmp.rows) {
    EXPECT_EQ(r.accuracy, 1.0) << ModelKindName(r.kind);
  }
  EXPECT_EQ(cmp.best.size(), 5u);
}

TEST(CompareModels, TableMatchesJson) {
  const Dataset d = testing::ToDataset(testing::DrawLogistic({}, 80, 13));
  const Comparison c = CompareModels(d, 3, 0.3, TrainConfig{});
  const auto j = ComparisonToJson(c);
  std::istringstream table(FormatComparisonTable(c));
  std::string line;
  std::getline(table, line);  // summary
  std::getline(table, line);  // header
  for (const auto& row : j["models"]) {
    std::getline(table, line);
    std::istringstream cells(line);
    std::string name;
    double acc, prec, loss, auc;
    cells >> name >> acc >> prec >> loss >> auc;
    EXPECT_EQ(name, row["model"]);
    EXPECT_NEAR(acc, row["accuracy"].get<double>(), 5e-7);
    EXPECT_NEAR(prec, row["precision"].get<double>(), 5e-7);
    EXPECT_NEAR(loss, row["log_loss"].get<double>(), 5e-7);
    EXPECT_NEAR(auc, row["auc"].get<double>(), 5e-7);
  }
  std::getline(table, line);
  std::string expected = "best:";
  for (const auto& b : j["best"]) expected += " " + b.get<std::string>();
  EXPECT_EQ(line, expected);
}

}  // namespace
}  // namespace citykpi
