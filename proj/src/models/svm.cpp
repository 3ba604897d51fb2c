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

#include "citykpi/models/svm.hpp"

#include <algorithm>
#include <cmath>

#include "citykpi/error.hpp"

namespace citykpi {
namespace {

int SignedLabel(int label) { return label == 1 ? 1 : -1; }

void CheckFinite(const SvmModel& model) {
  bool ok = std::isfinite(model.b);
  for (double v : model.w) ok = ok && std::isfinite(v);
  if (!ok) throw Error(ErrorCode::kNonFinite, "SVM training diverged");
}

}  // namespace

double SvmModel::Score(std::span<const double> x) const {
  if (x.size() != w.size()) {
    throw Error(ErrorCode::kWidthMismatch, "SVM model width mismatch");
  }
  double s = b;
  for (std::size_t j = 0; j < x.size(); ++j) s += w[j] * x[j];
  return s;
}

double SvmModel::Norm() const {
  double ss = 0.0;
  for (double v : w) ss += v * v;
  return std::sqrt(ss);
}

double HingeLoss(int signed_label, double score) {
  return std::max(0.0, 1.0 - signed_label * score);
}

SvmObjective EvaluateSvmObjective(const FeatureMatrix& x, const LabelVector& y,
                                  const SvmModel& model) {
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch, "X and y differ in length");
  }
  SvmObjective objective;
  const double norm = model.Norm();
  objective.regularization = 0.5 * norm * norm;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    objective.hinge_sum += HingeLoss(SignedLabel(y[i]), model.Score(x.row(i)));
  }
  objective.total = objective.regularization + model.c * objective.hinge_sum;
  return objective;
}

SvmModel SvmFit(const FeatureMatrix& x, const LabelVector& y,
                const SvmConfig& config,
                std::vector<double>* objective_history) {
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch, "X and y differ in length");
  }
  if (!(config.c > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "SVM c must be positive");
  }
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  const double lambda = 1.0 / (config.c * static_cast<double>(n));

  SvmModel model;
  model.w.assign(p, 0.0);
  model.c = config.c;
  if (objective_history) objective_history->clear();

  std::uint64_t t = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = 0; i < n; ++i) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const int label = SignedLabel(y[i]);
      const auto row = x.row(i);
      const bool violated = label * model.Score(row) < 1.0;
      const double shrink = 1.0 - eta * lambda;
      for (double& v : model.w) v *= shrink;
      if (violated) {
        for (std::size_t j = 0; j < p; ++j) model.w[j] += eta * label * row[j];
        model.b += eta * label;
      }
    }
    CheckFinite(model);
    if (objective_history) {
      objective_history->push_back(EvaluateSvmObjective(x, y, model).total);
    }
  }
  return model;
}

}  // namespace citykpi
