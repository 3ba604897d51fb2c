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

#include "citykpi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "citykpi/error.hpp"

namespace citykpi {
namespace {

using nlohmann::json;

void CheckBinary(std::span<const int> labels) {
  for (int v : labels) {
    if (v != 0 && v != 1) {
      throw Error(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
    }
  }
}

double Ratio(std::size_t num, std::size_t den, bool* zero_division) {
  if (den == 0) {
    if (zero_division) *zero_division = true;
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionMatrix Confusion(std::span<const int> y_true,
                          std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "y_true and y_pred differ in length");
  }
  CheckBinary(y_true);
  CheckBinary(y_pred);
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    ++cm.counts[y_true[i]][y_pred[i]];
  }
  return cm;
}

double Accuracy(const ConfusionMatrix& cm) {
  if (cm.total() == 0) {
    throw Error(ErrorCode::kEmptyMatrix, "confusion matrix is empty");
  }
  return static_cast<double>(cm.tp() + cm.tn()) /
         static_cast<double>(cm.total());
}

ClassMetrics ComputeClassMetrics(const ConfusionMatrix& cm, int positive_class,
                                 bool* zero_division) {
  if (positive_class != 0 && positive_class != 1) {
    throw Error(ErrorCode::kInvalidArgument, "positive class must be 0 or 1");
  }
  const int pos = positive_class;
  const int neg = 1 - pos;
  const std::size_t tp = cm.counts[pos][pos];
  const std::size_t fp = cm.counts[neg][pos];
  const std::size_t fn = cm.counts[pos][neg];

  ClassMetrics m;
  m.precision = Ratio(tp, tp + fp, zero_division);
  m.recall = Ratio(tp, tp + fn, zero_division);
  if (m.precision + m.recall > 0.0) {
    // Harmonic mean of P and R, taken straight from the counts so it is
    // rounded once.
    m.f1 = static_cast<double>(2 * tp) / static_cast<double>(2 * tp + fp + fn);
  } else if (zero_division) {
    *zero_division = true;
  }
  m.support = tp + fn;
  return m;
}

Report MakeReport(const ConfusionMatrix& cm) {
  Report r;
  r.accuracy = Accuracy(cm);
  r.per_class[0] = ComputeClassMetrics(cm, 0, &r.zero_division);
  r.per_class[1] = ComputeClassMetrics(cm, 1, &r.zero_division);

  const auto& c0 = r.per_class[0];
  const auto& c1 = r.per_class[1];
  const std::size_t total = c0.support + c1.support;
  r.macro_avg = {(c0.precision + c1.precision) / 2.0,
                 (c0.recall + c1.recall) / 2.0, (c0.f1 + c1.f1) / 2.0, total};

  const double w0 = static_cast<double>(c0.support);
  const double w1 = static_cast<double>(c1.support);
  const double n = static_cast<double>(total);
  r.weighted_avg = {(w0 * c0.precision + w1 * c1.precision) / n,
                    (w0 * c0.recall + w1 * c1.recall) / n,
                    (w0 * c0.f1 + w1 * c1.f1) / n, total};
  return r;
}

Report MakeReport(std::span<const int> y_true, std::span<const int> y_pred) {
  return MakeReport(Confusion(y_true, y_pred));
}

double WeightedScore(const ClassMetrics& m, const WeightSpec& w) {
  if (w.precision < 0.0 || w.recall < 0.0 || w.f1 < 0.0) {
    throw Error(ErrorCode::kZeroWeights, "weights must be non-negative");
  }
  const double sum = w.precision + w.recall + w.f1;
  if (!(sum > 0.0)) {
    throw Error(ErrorCode::kZeroWeights, "weights must not all be zero");
  }
  return (w.precision * m.precision + w.recall * m.recall + w.f1 * m.f1) / sum;
}

double LogLoss(std::span<const int> y_true, std::span<const double> probs) {
  if (y_true.size() != probs.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "labels and probabilities differ in length");
  }
  if (y_true.empty()) {
    throw Error(ErrorCode::kEmptyMatrix, "log loss of an empty sample");
  }
  CheckBinary(y_true);
  constexpr double kEps = 1e-15;
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0.0 && probs[i] <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "probabilities must be in [0,1]");
    }
    const double p = std::clamp(probs[i], kEps, 1.0 - kEps);
    total += y_true[i] == 1 ? std::log(p) : std::log(1.0 - p);
  }
  return -total / static_cast<double>(probs.size());
}

RocResult RocAuc(std::span<const int> y_true, std::span<const double> scores) {
  if (y_true.size() != scores.size()) {
    throw Error(ErrorCode::kLengthMismatch, "labels and scores differ in length");
  }
  CheckBinary(y_true);
  const std::size_t positives =
      static_cast<std::size_t>(std::count(y_true.begin(), y_true.end(), 1));
  const std::size_t negatives = y_true.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw Error(ErrorCode::kSingleClass, "ROC needs both classes present");
  }
  for (double s : scores) {
    if (std::isnan(s)) throw Error(ErrorCode::kNonFinite, "score is NaN");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  RocResult result;
  RocCurve& curve = result.curve;
  curve.fpr.push_back(0.0);
  curve.tpr.push_back(0.0);
  curve.thresholds.push_back(std::numeric_limits<double>::infinity());

  std::size_t tp = 0;
  std::size_t fp = 0;
  // Twice the trapezoid area in units of (1/negatives) x (1/positives); kept
  // integral so the sum is exact.
  std::size_t doubled_area = 0;
  std::size_t k = 0;
  while (k < order.size()) {
    const double score = scores[order[k]];
    const std::size_t tp_before = tp;
    const std::size_t fp_before = fp;
    // All samples sharing this score enter the curve in one step.
    while (k < order.size() && scores[order[k]] == score) {
      (y_true[order[k]] == 1 ? tp : fp) += 1;
      ++k;
    }
    doubled_area += (fp - fp_before) * (tp + tp_before);
    curve.fpr.push_back(static_cast<double>(fp) / static_cast<double>(negatives));
    curve.tpr.push_back(static_cast<double>(tp) / static_cast<double>(positives));
    curve.thresholds.push_back(score);
  }
  result.auc = static_cast<double>(doubled_area) /
               (2.0 * static_cast<double>(positives) *
                static_cast<double>(negatives));
  return result;
}

std::vector<int> ApplyThreshold(std::span<const double> probs,
                                double threshold) {
  std::vector<int> out(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    out[i] = probs[i] >= threshold ? 1 : 0;
  }
  return out;
}

Evaluation Evaluate(std::span<const int> y_true, std::span<const double> probs,
                    double threshold) {
  Evaluation e;
  e.threshold = threshold;
  const auto predictions = ApplyThreshold(probs, threshold);
  e.confusion = Confusion(y_true, predictions);
  e.report = MakeReport(e.confusion);
  const auto positives = std::count(y_true.begin(), y_true.end(), 1);
  if (positives > 0 && static_cast<std::size_t>(positives) < y_true.size()) {
    e.roc = RocAuc(y_true, probs);
  }
  e.log_loss = LogLoss(y_true, probs);
  return e;
}

json ConfusionToJson(const ConfusionMatrix& cm) {
  return {{"matrix", cm.counts},
          {"tp", cm.tp()},
          {"tn", cm.tn()},
          {"fp", cm.fp()},
          {"fn", cm.fn()}};
}

json ClassMetricsToJson(const ClassMetrics& m) {
  return {{"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1},
          {"support", m.support}};
}

json ReportToJson(const Report& report) {
  return {{"classes",
           {{"0", ClassMetricsToJson(report.per_class[0])},
            {"1", ClassMetricsToJson(report.per_class[1])}}},
          {"accuracy", report.accuracy},
          {"macro_avg", ClassMetricsToJson(report.macro_avg)},
          {"weighted_avg", ClassMetricsToJson(report.weighted_avg)},
          {"zero_division", report.zero_division}};
}

std::string FormatReport(const Report& report, int digits) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%12s %10s %10s %10s %10s\n", "", "precision",
                "recall", "f1-score", "support");
  out += line;
  auto row = [&](const char* name, const ClassMetrics& m) {
    std::snprintf(line, sizeof line, "%12s %10.*f %10.*f %10.*f %10zu\n", name,
                  digits, m.precision, digits, m.recall, digits, m.f1,
                  m.support);
    out += line;
  };
  row("0", report.per_class[0]);
  row("1", report.per_class[1]);
  std::snprintf(line, sizeof line, "%12s %10s %10s %10.*f %10zu\n", "accuracy",
                "", "", digits, report.accuracy, report.macro_avg.support);
  out += line;
  row("macro avg", report.macro_avg);
  row("weighted avg", report.weighted_avg);
  return out;
}

json RocToJson(const RocResult& roc) {
  json thresholds = json::array();
  for (double t : roc.curve.thresholds) {
    thresholds.push_back(std::isinf(t) ? json(nullptr) : json(t));
  }
  return {{"fpr", roc.curve.fpr},
          {"tpr", roc.curve.tpr},
          {"thresholds", std::move(thresholds)},
          {"auc", roc.auc}};
}

json EvaluationToJson(const Evaluation& e) {
  return {{"threshold", e.threshold},
          {"report", ReportToJson(e.report)},
          {"confusion_matrix", ConfusionToJson(e.confusion)},
          {"roc", e.roc ? RocToJson(*e.roc) : json(nullptr)},
          {"auc", e.roc ? json(e.roc->auc) : json(nullptr)},
          {"log_loss", e.log_loss}};
}

}  // namespace citykpi
