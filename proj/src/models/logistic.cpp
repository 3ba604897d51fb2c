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

#include "citykpi/models/logistic.hpp"

#include <algorithm>
#include <cmath>

#include "citykpi/error.hpp"

namespace citykpi {

double Sigmoid(double z) {
  // exp(-|z|) never overflows; pick the numerator that keeps full relative
  // precision in each tail.
  const double e = std::exp(-std::abs(z));
  const double s = 1.0 / (1.0 + e);
  return z >= 0.0 ? s : e * s;
}

double Softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

double LogisticModel::Logit(std::span<const double> x) const {
  if (x.size() != beta.size()) {
    throw Error(ErrorCode::kWidthMismatch, "logistic model width mismatch");
  }
  double z = beta0;
  for (std::size_t j = 0; j < x.size(); ++j) z += beta[j] * x[j];
  return z;
}

double LogisticModel::Probability(std::span<const double> x) const {
  return Sigmoid(Logit(x));
}

double LogisticLoss(const FeatureMatrix& x, const LabelVector& y,
                    const LogisticModel& model) {
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch, "X and y differ in length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double z = model.Logit(x.row(i));
    // -[y log s(z) + (1-y) log(1-s(z))] == softplus(z) - y z
    total += Softplus(z) - y[i] * z;
  }
  return total / static_cast<double>(x.rows());
}

LogisticGradient LogisticLossGradient(const FeatureMatrix& x,
                                      const LabelVector& y,
                                      const LogisticModel& model) {
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch, "X and y differ in length");
  }
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  LogisticGradient grad;
  grad.d_beta.assign(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = x.row(i);
    const double z = model.Logit(row);
    grad.loss += Softplus(z) - y[i] * z;
    const double residual = Sigmoid(z) - y[i];
    grad.d_beta0 += residual;
    for (std::size_t j = 0; j < p; ++j) grad.d_beta[j] += residual * row[j];
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  grad.loss *= inv_n;
  grad.d_beta0 *= inv_n;
  for (double& g : grad.d_beta) g *= inv_n;
  return grad;
}

LogisticModel LogisticFit(const FeatureMatrix& x, const LabelVector& y,
                          const LogisticConfig& config) {
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch, "X and y differ in length");
  }
  LogisticModel model;
  model.beta.assign(x.cols(), 0.0);
  for (int it = 0; it < config.iterations; ++it) {
    const LogisticGradient grad = LogisticLossGradient(x, y, model);
    if (!std::isfinite(grad.loss)) {
      throw Error(ErrorCode::kNonFinite,
                  "logistic regression diverged; lower the learning rate");
    }
    model.beta0 -= config.learning_rate * grad.d_beta0;
    for (std::size_t j = 0; j < model.beta.size(); ++j) {
      model.beta[j] -= config.learning_rate * grad.d_beta[j];
    }
  }
  if (!std::isfinite(model.beta0) ||
      !std::isfinite(LogisticLoss(x, y, model))) {
    throw Error(ErrorCode::kNonFinite, "logistic regression diverged");
  }
  for (double b : model.beta) {
    if (!std::isfinite(b)) {
      throw Error(ErrorCode::kNonFinite, "logistic regression diverged");
    }
  }
  return model;
}

}  // namespace citykpi
