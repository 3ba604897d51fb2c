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

// Binary classification evaluation: confusion matrix, per-class and averaged
// precision/recall/F1, custom weighted scores, log loss, ROC and AUC.
// Class 1 is the positive class throughout.

#ifndef CITYKPI_METRICS_HPP_
#define CITYKPI_METRICS_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace citykpi {

struct ConfusionMatrix {
  // counts[actual][predicted]
  std::array<std::array<std::size_t, 2>, 2> counts{};

  std::size_t tp() const { return counts[1][1]; }
  std::size_t tn() const { return counts[0][0]; }
  std::size_t fp() const { return counts[0][1]; }
  std::size_t fn() const { return counts[1][0]; }
  std::size_t total() const {
    return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
  }

  bool operator==(const ConfusionMatrix&) const = default;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;

  bool operator==(const ClassMetrics&) const = default;
};

struct Report {
  std::array<ClassMetrics, 2> per_class;
  double accuracy = 0.0;
  ClassMetrics macro_avg;
  ClassMetrics weighted_avg;
  // Set when some precision/recall/F1 had a zero denominator and was
  // reported as 0.
  bool zero_division = false;

  bool operator==(const Report&) const = default;
};

// Weights on precision, recall and F1.
struct WeightSpec {
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;

  // The precision-leaning form (w_p, w_r, 1).
  static WeightSpec PrecisionRecall(double wp, double wr) { return {wp, wr, 1.0}; }
  // The recall-leaning form (1, w_r, 1).
  static WeightSpec RecallOnly(double wr) { return {1.0, wr, 1.0}; }
};

struct RocCurve {
  std::vector<double> fpr;
  std::vector<double> tpr;
  // thresholds[0] is +infinity (nothing predicted positive); thresholds[k] for
  // k >= 1 is the k-th largest distinct score.
  std::vector<double> thresholds;
};

struct RocResult {
  RocCurve curve;
  double auc = 0.0;
};

ConfusionMatrix Confusion(std::span<const int> y_true, std::span<const int> y_pred);

// (TP + TN) / total. Throws kEmptyMatrix when total is 0.
double Accuracy(const ConfusionMatrix& cm);

// Metrics of `positive_class` (0 or 1) read as the positive class. Zero
// denominators yield 0; `zero_division` is set when that happens.
ClassMetrics ComputeClassMetrics(const ConfusionMatrix& cm, int positive_class,
                                 bool* zero_division = nullptr);

Report MakeReport(const ConfusionMatrix& cm);
Report MakeReport(std::span<const int> y_true, std::span<const int> y_pred);

// (w1 P + w2 R + w3 F1) / (w1 + w2 + w3). Throws kZeroWeights when the
// weights are negative or sum to zero.
double WeightedScore(const ClassMetrics& m, const WeightSpec& w);

// Mean binary cross-entropy with probabilities clipped to [1e-15, 1 - 1e-15].
double LogLoss(std::span<const int> y_true, std::span<const double> probs);

// Throws kSingleClass unless both classes are present.
RocResult RocAuc(std::span<const int> y_true, std::span<const double> scores);

std::vector<int> ApplyThreshold(std::span<const double> probs, double threshold);

// Everything the dashboard shows for a model at one threshold.
struct Evaluation {
  double threshold = 0.5;
  ConfusionMatrix confusion;
  Report report;
  // Absent when the evaluated labels hold a single class.
  std::optional<RocResult> roc;
  double log_loss = 0.0;
};

Evaluation Evaluate(std::span<const int> y_true, std::span<const double> probs,
                    double threshold);

nlohmann::json ConfusionToJson(const ConfusionMatrix& cm);
nlohmann::json ClassMetricsToJson(const ClassMetrics& m);
// {"classes":{"0":{...},"1":{...}},"accuracy":x,"macro_avg":{...},
//  "weighted_avg":{...},"zero_division":bool}
nlohmann::json ReportToJson(const Report& report);
// Plain-text classification report with `digits` decimals, formatted with
// printf rounding (an exact tie such as 0.625 prints as 0.62).
std::string FormatReport(const Report& report, int digits = 2);
nlohmann::json RocToJson(const RocResult& roc);
nlohmann::json EvaluationToJson(const Evaluation& evaluation);

}  // namespace citykpi

#endif  // CITYKPI_METRICS_HPP_
