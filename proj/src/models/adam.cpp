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

#include "citykpi/models/adam.hpp"

#include <cmath>

#include "citykpi/error.hpp"

namespace citykpi {

AdamOptimizer::AdamOptimizer(const AdamConfig& config, std::size_t size)
    : config_(config), m_(size, 0.0), v_(size, 0.0) {}

void AdamOptimizer::Step(std::span<double> params,
                         std::span<const double> grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw Error(ErrorCode::kWidthMismatch, "Adam parameter block size mismatch");
  }
  ++t_;
  const double bias1 = 1.0 - std::pow(config_.beta1, t_);
  const double bias2 = 1.0 - std::pow(config_.beta2, t_);
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * grads[i];
    v_[i] = config_.beta2 * v_[i] + (1.0 - config_.beta2) * grads[i] * grads[i];
    const double m_hat = m_[i] / bias1;
    const double v_hat = v_[i] / bias2;
    params[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
  }
}

void AdamOptimizer::Step(double& param, double grad) {
  Step(std::span<double>(&param, 1), std::span<const double>(&grad, 1));
}

}  // namespace citykpi
