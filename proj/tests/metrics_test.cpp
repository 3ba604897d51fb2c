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

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "citykpi/error.hpp"
#include "citykpi/metrics.hpp"
#include "support.hpp"

namespace citykpi {
namespace {

ConfusionMatrix ReferenceMatrix() {
  ConfusionMatrix cm;
  cm.counts = {{{5, 4}, {3, 1}}};
  return cm;
}

// Labels that reproduce the reference matrix.
std::pair<std::vector<int>, std::vector<int>> ReferenceLabels() {
  std::vector<int> t, p;
  auto add = [&](int a, int b, int k) {
    for (int i = 0; i < k; ++i) {
      t.push_back(a);
      p.push_back(b);
    }
  };
  add(0, 0, 5);
  add(0, 1, 4);
  add(1, 0, 3);
  add(1, 1, 1);
  return {t, p};
}

// Two-decimal rendering as a report table prints it.
double Round2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return std::strtod(buf, nullptr);
}

TEST(Confusion, ReferenceMatrix) {
  const auto [t, p] = ReferenceLabels();
  EXPECT_EQ(Confusion(t, p), ReferenceMatrix());
  EXPECT_EQ(ReferenceMatrix().tp(), 1u);
  EXPECT_EQ(ReferenceMatrix().fp(), 4u);
  EXPECT_EQ(ReferenceMatrix().fn(), 3u);
  EXPECT_EQ(ReferenceMatrix().tn(), 5u);
}

TEST(Confusion, IdentityAndSwap) {
  const std::vector<int> y = {0, 1, 1, 0, 1};
  const auto cm = Confusion(y, y);
  EXPECT_EQ(cm.counts[0][1], 0u);
  EXPECT_EQ(cm.counts[1][0], 0u);
  const std::vector<int> a = {1, 0}, b = {0, 1};
  ConfusionMatrix swapped;
  swapped.counts = {{{0, 1}, {1, 0}}};
  EXPECT_EQ(Confusion(a, b), swapped);
}

TEST(Confusion, LengthMismatch) {
  const std::vector<int> a = {1, 0}, b = {0};
  try {
    Confusion(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
}

TEST(Accuracy, Examples) {
  EXPECT_DOUBLE_EQ(Accuracy(ReferenceMatrix()), 6.0 / 13.0);
  EXPECT_NEAR(Accuracy(ReferenceMatrix()), 0.46153846153846156, 1e-17);
  ConfusionMatrix perfect;
  perfect.counts = {{{9, 0}, {0, 4}}};
  EXPECT_EQ(Accuracy(perfect), 1.0);
  ConfusionMatrix wrong;
  wrong.counts = {{{0, 9}, {4, 0}}};
  EXPECT_EQ(Accuracy(wrong), 0.0);
  try {
    Accuracy(ConfusionMatrix{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyMatrix);
  }
}

TEST(ClassMetrics, ReferenceRows) {
  const ClassMetrics one = ComputeClassMetrics(ReferenceMatrix(), 1);
  EXPECT_DOUBLE_EQ(one.precision, 0.2);
  EXPECT_DOUBLE_EQ(one.recall, 0.25);
  EXPECT_NEAR(one.f1, 2.0 / 9.0, 1e-15);
  EXPECT_EQ(one.support, 4u);
  const ClassMetrics zero = ComputeClassMetrics(ReferenceMatrix(), 0);
  EXPECT_DOUBLE_EQ(zero.precision, 0.625);
  EXPECT_NEAR(zero.recall, 5.0 / 9.0, 1e-15);
  EXPECT_NEAR(zero.f1, 10.0 / 17.0, 1e-15);
  EXPECT_EQ(zero.support, 9u);
}

TEST(ClassMetrics, ZeroDivisionFlag) {
  ConfusionMatrix cm;
  cm.counts = {{{3, 0}, {2, 0}}};
  bool flag = false;
  const ClassMetrics m = ComputeClassMetrics(cm, 1, &flag);
  EXPECT_EQ(m.precision, 0.0);
  EXPECT_EQ(m.f1, 0.0);
  EXPECT_TRUE(flag);
  EXPECT_TRUE(MakeReport(cm).zero_division);
  EXPECT_FALSE(MakeReport(ReferenceMatrix()).zero_division);
}

TEST(Report, ReferenceTable) {
  const Report r = MakeReport(ReferenceMatrix());
  EXPECT_EQ(Round2(r.per_class[0].precision), 0.62);
  EXPECT_EQ(Round2(r.per_class[0].recall), 0.56);
  EXPECT_EQ(Round2(r.per_class[0].f1), 0.59);
  EXPECT_EQ(Round2(r.per_class[1].precision), 0.20);
  EXPECT_EQ(Round2(r.per_class[1].recall), 0.25);
  EXPECT_EQ(Round2(r.per_class[1].f1), 0.22);
  EXPECT_EQ(Round2(r.accuracy), 0.46);
  EXPECT_NEAR(r.macro_avg.precision, 0.4125, 1e-15);
  EXPECT_EQ(Round2(r.macro_avg.recall), 0.40);
  EXPECT_EQ(Round2(r.macro_avg.f1), 0.41);
  EXPECT_NEAR(r.weighted_avg.precision, (9 * 0.625 + 4 * 0.2) / 13, 1e-15);
  EXPECT_EQ(Round2(r.weighted_avg.recall), 0.46);
  EXPECT_NEAR(r.weighted_avg.f1, 0.4756, 1e-4);
  EXPECT_EQ(r.macro_avg.support, 13u);
  EXPECT_EQ(r.weighted_avg.support, 13u);
  const auto [t, p] = ReferenceLabels();
  EXPECT_EQ(MakeReport(t, p), r);
}

TEST(Report, FormattedTable) {
  const std::string text = FormatReport(MakeReport(ReferenceMatrix()));
  EXPECT_EQ(text,
            "              precision     recall   f1-score    support\n"
            "           0       0.62       0.56       0.59          9\n"
            "           1       0.20       0.25       0.22          4\n"
            "    accuracy                             0.46         13\n"
            "   macro avg       0.41       0.40       0.41         13\n"
            "weighted avg       0.49       0.46       0.48         13\n");
}

TEST(Report, PerfectPrediction) {
  const std::vector<int> y = {0, 1, 1, 0, 0};
  const Report r = MakeReport(y, y);
  EXPECT_EQ(r.accuracy, 1.0);
  for (const auto& m : {r.per_class[0], r.per_class[1], r.macro_avg, r.weighted_avg}) {
    EXPECT_EQ(m.precision, 1.0);
    EXPECT_EQ(m.recall, 1.0);
    EXPECT_EQ(m.f1, 1.0);
  }
}

TEST(Report, InvariantsProperty) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + rng() % 30;
    std::vector<int> t(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = rng() & 1;
      p[i] = rng() & 1;
    }
    const Report r = MakeReport(t, p);
    EXPECT_NEAR(r.weighted_avg.recall, r.accuracy, 1e-15);
    for (const auto& m : r.per_class) {
      if (m.precision > 0 && m.recall > 0) {
        EXPECT_GE(m.f1, std::min(m.precision, m.recall) - 1e-15);
        EXPECT_LE(m.f1, std::max(m.precision, m.recall) + 1e-15);
      }
    }
  }
}

TEST(WeightedScore, Examples) {
  const ClassMetrics m{0.6, 0.4, 0.48, 0};
  EXPECT_NEAR(WeightedScore(m, {1, 1, 1}), 0.493333, 1e-6);
  EXPECT_EQ(WeightedScore(m, {1, 0, 0}), 0.6);
  const ClassMetrics zero{0.625, 0.5556, 0.5882, 9};
  EXPECT_NEAR(WeightedScore(zero, WeightSpec::PrecisionRecall(2, 1)), 0.59845, 1e-12);
  EXPECT_NEAR(WeightedScore(zero, WeightSpec::RecallOnly(2)),
              (0.625 + 2 * 0.5556 + 0.5882) / 4, 1e-12);
  for (const WeightSpec w : {WeightSpec{0, 0, 0}, WeightSpec{-1, 1, 0}}) {
    try {
      WeightedScore(m, w);
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kZeroWeights);
    }
  }
}

TEST(LogLoss, Examples) {
  const std::vector<int> one = {1};
  const std::vector<double> p1 = {1.0}, p0 = {0.0};
  EXPECT_NEAR(LogLoss(one, p1), 0.0, 1e-14);
  const std::vector<int> y = {1, 0};
  const std::vector<double> half = {0.5, 0.5};
  EXPECT_NEAR(LogLoss(y, half), std::log(2.0), 1e-15);
  const double clipped = LogLoss(one, p0);
  EXPECT_TRUE(std::isfinite(clipped));
  EXPECT_NEAR(clipped, -std::log(1e-15), 1e-9);
  EXPECT_NEAR(clipped, 34.54, 0.01);
  EXPECT_THROW(LogLoss(y, p1), Error);
}

TEST(Roc, Examples) {
  const std::vector<int> y = {1, 0, 1, 0};
  const std::vector<double> s = {0.8, 0.9, 0.7, 0.2};
  EXPECT_DOUBLE_EQ(RocAuc(y, s).auc, 0.5);
  const std::vector<double> separating = {0.9, 0.1, 0.8, 0.3};
  EXPECT_EQ(RocAuc(y, separating).auc, 1.0);
  const std::vector<double> flat = {0.4, 0.4, 0.4, 0.4};
  const RocResult r = RocAuc(y, flat);
  EXPECT_EQ(r.auc, 0.5);
  EXPECT_EQ(r.curve.fpr, (std::vector<double>{0, 1}));
  EXPECT_EQ(r.curve.tpr, (std::vector<double>{0, 1}));
  EXPECT_TRUE(std::isinf(r.curve.thresholds[0]));
  const std::vector<int> single = {1, 1};
  const std::vector<double> two = {0.1, 0.2};
  try {
    RocAuc(single, two);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingleClass);
  }
}

TEST(Roc, CurveShapeAndPairwiseOracle) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng() % 40;
    std::vector<int> y(n);
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = rng() & 1;
      s[i] = double(rng() % 8) / 8.0;  // plenty of ties
    }
    y[0] = 0;
    y[1] = 1;
    const RocResult r = RocAuc(y, s);
    const auto& c = r.curve;
    ASSERT_EQ(c.fpr.size(), c.tpr.size());
    ASSERT_EQ(c.fpr.size(), c.thresholds.size());
    EXPECT_EQ(c.fpr.front(), 0.0);
    EXPECT_EQ(c.tpr.front(), 0.0);
    EXPECT_EQ(c.fpr.back(), 1.0);
    EXPECT_EQ(c.tpr.back(), 1.0);
    for (std::size_t k = 1; k < c.fpr.size(); ++k) {
      EXPECT_GE(c.fpr[k], c.fpr[k - 1]);
      EXPECT_GE(c.tpr[k], c.tpr[k - 1]);
      EXPECT_LT(c.thresholds[k], c.thresholds[k - 1]);
    }
    EXPECT_NEAR(r.auc, testing::PairwiseAuc(y, s), 1e-12);
  }
}

TEST(ApplyThreshold, Rule) {
  const std::vector<double> p = {0.0, 0.49, 0.5, 1.0};
  EXPECT_EQ(ApplyThreshold(p, 0.5), (std::vector<int>{0, 0, 1, 1}));
  EXPECT_EQ(ApplyThreshold(p, 0.0), (std::vector<int>{1, 1, 1, 1}));
}

TEST(Evaluate, ThresholdSweep) {
  const std::vector<int> y = {1, 0, 1, 1, 0, 0};
  const std::vector<double> p = {0.9, 0.4, 0.35, 0.8, 0.1, 0.6};
  const Evaluation zero = Evaluate(y, p, 0.0);
  EXPECT_EQ(zero.report.per_class[1].recall, 1.0);
  const Evaluation a = Evaluate(y, p, 0.3), b = Evaluate(y, p, 0.7);
  ASSERT_TRUE(a.roc && b.roc);
  EXPECT_EQ(a.roc->auc, b.roc->auc);
  EXPECT_EQ(a.log_loss, b.log_loss);
  EXPECT_NE(a.confusion, b.confusion);
  const std::vector<int> only = {1, 1};
  const std::vector<double> q = {0.2, 0.9};
  EXPECT_FALSE(Evaluate(only, q, 0.5).roc.has_value());
}

TEST(MetricsJson, Shapes) {
  const auto report = ReportToJson(MakeReport(ReferenceMatrix()));
  EXPECT_TRUE(report["classes"].contains("0"));
  EXPECT_TRUE(report["classes"].contains("1"));
  EXPECT_EQ(report["classes"]["1"]["support"], 4);
  EXPECT_DOUBLE_EQ(report["accuracy"].get<double>(), 6.0 / 13.0);
  EXPECT_TRUE(report.contains("macro_avg"));
  EXPECT_TRUE(report.contains("weighted_avg"));
  const auto cm = ConfusionToJson(ReferenceMatrix());
  EXPECT_EQ(cm["matrix"], nlohmann::json::parse("[[5,4],[3,1]]"));
  const std::vector<int> y = {1, 0};
  const std::vector<double> s = {0.7, 0.2};
  const auto roc = RocToJson(RocAuc(y, s));
  EXPECT_TRUE(roc["thresholds"][0].is_null());
  EXPECT_EQ(roc["auc"], 1.0);
  const auto ev = EvaluationToJson(Evaluate(y, s, 0.5));
  for (const char* key : {"threshold", "report", "confusion_matrix", "roc", "auc",
                          "log_loss"}) {
    EXPECT_TRUE(ev.contains(key)) << key;
  }
}

}  // namespace
}  // namespace citykpi
