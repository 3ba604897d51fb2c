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

#include "citykpi/models/ann.hpp"

#include <cmath>

#include "citykpi/error.hpp"
#include "citykpi/models/adam.hpp"
#include "citykpi/models/logistic.hpp"
#include "citykpi/random.hpp"

namespace citykpi {
namespace {

void CheckShapes(const AnnModel& m) {
  if (m.hidden_weights.size() != m.hidden * m.inputs ||
      m.hidden_bias.size() != m.hidden || m.output_weights.size() != m.hidden) {
    throw Error(ErrorCode::kInvalidArgument, "ANN weight shapes do not chain");
  }
}

// Fills `pre` with hidden pre-activations and returns the output logit.
double Forward(const AnnModel& m, std::span<const double> x,
               std::vector<double>& pre) {
  if (x.size() != m.inputs) {
    throw Error(ErrorCode::kWidthMismatch, "ANN input width mismatch");
  }
  pre.resize(m.hidden);
  double z = m.output_bias;
  for (std::size_t k = 0; k < m.hidden; ++k) {
    double a = m.hidden_bias[k];
    const double* w = m.hidden_weights.data() + k * m.inputs;
    for (std::size_t j = 0; j < m.inputs; ++j) a += w[j] * x[j];
    pre[k] = a;
    if (a > 0.0) z += m.output_weights[k] * a;
  }
  return z;
}

bool AllFinite(const std::vector<double>& v) {
  for (double d : v) {
    if (!std::isfinite(d)) return false;
  }
  return true;
}

}  // namespace

double AnnModel::Logit(std::span<const double> x) const {
  std::vector<double> pre;
  return Forward(*this, x, pre);
}

double AnnModel::Probability(std::span<const double> x) const {
  return Sigmoid(Logit(x));
}

AnnModel AnnInitialize(std::size_t inputs, std::size_t hidden,
                       std::uint64_t seed) {
  AnnModel m;
  m.inputs = inputs;
  m.hidden = hidden;
  SplitMix64 rng(seed);
  const double hidden_limit =
      std::sqrt(6.0 / static_cast<double>(inputs + hidden));
  const double output_limit = std::sqrt(6.0 / static_cast<double>(hidden + 1));
  m.hidden_weights.resize(hidden * inputs);
  for (double& w : m.hidden_weights) {
    w = (2.0 * rng.NextUnit() - 1.0) * hidden_limit;
  }
  m.hidden_bias.assign(hidden, 0.0);
  m.output_weights.resize(hidden);
  for (double& w : m.output_weights) {
    w = (2.0 * rng.NextUnit() - 1.0) * output_limit;
  }
  m.output_bias = 0.0;
  return m;
}

double AnnLoss(const FeatureMatrix& x, const LabelVector& y,
               const AnnModel& model) {
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch, "X and y differ in length");
  }
  CheckShapes(model);
  std::vector<double> pre;
  double total = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double z = Forward(model, x.row(i), pre);
    total += Softplus(z) - y[i] * z;
  }
  return total / static_cast<double>(x.rows());
}

AnnGradient AnnLossGradient(const FeatureMatrix& x, const LabelVector& y,
                            const AnnModel& model) {
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch, "X and y differ in length");
  }
  CheckShapes(model);
  const std::size_t n = x.rows();
  const std::size_t p = model.inputs;
  const std::size_t h = model.hidden;
  const double inv_n = 1.0 / static_cast<double>(n);

  AnnGradient g;
  g.hidden_weights.assign(h * p, 0.0);
  g.hidden_bias.assign(h, 0.0);
  g.output_weights.assign(h, 0.0);

  std::vector<double> pre;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = x.row(i);
    const double z = Forward(model, row, pre);
    g.loss += Softplus(z) - y[i] * z;
    const double dz = (Sigmoid(z) - y[i]) * inv_n;
    g.output_bias += dz;
    for (std::size_t k = 0; k < h; ++k) {
      if (pre[k] <= 0.0) continue;
      g.output_weights[k] += dz * pre[k];
      const double da = dz * model.output_weights[k];
      g.hidden_bias[k] += da;
      double* gw = g.hidden_weights.data() + k * p;
      for (std::size_t j = 0; j < p; ++j) gw[j] += da * row[j];
    }
  }
  g.loss *= inv_n;
  return g;
}

AnnModel AnnFit(const FeatureMatrix& x, const LabelVector& y,
                const AnnConfig& config) {
  if (config.hidden_units < 1) {
    throw Error(ErrorCode::kInvalidArgument, "ANN needs at least one hidden unit");
  }
  AnnModel model = AnnInitialize(x.cols(),
                                 static_cast<std::size_t>(config.hidden_units),
                                 config.adam.init_seed);
  AdamOptimizer hidden_w(config.adam, model.hidden_weights.size());
  AdamOptimizer hidden_b(config.adam, model.hidden_bias.size());
  AdamOptimizer output_w(config.adam, model.output_weights.size());
  AdamOptimizer output_b(config.adam, 1);

  for (int epoch = 0; epoch < config.adam.epochs; ++epoch) {
    const AnnGradient g = AnnLossGradient(x, y, model);
    if (!std::isfinite(g.loss)) {
      throw Error(ErrorCode::kNonFinite, "ANN training diverged");
    }
    hidden_w.Step(model.hidden_weights, g.hidden_weights);
    hidden_b.Step(model.hidden_bias, g.hidden_bias);
    output_w.Step(model.output_weights, g.output_weights);
    output_b.Step(model.output_bias, g.output_bias);
  }
  if (!AllFinite(model.hidden_weights) || !AllFinite(model.hidden_bias) ||
      !AllFinite(model.output_weights) || !std::isfinite(model.output_bias)) {
    throw Error(ErrorCode::kNonFinite, "ANN training diverged");
  }
  return model;
}

}  // namespace citykpi
