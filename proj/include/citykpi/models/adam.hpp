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

#ifndef CITYKPI_MODELS_ADAM_HPP_
#define CITYKPI_MODELS_ADAM_HPP_

#include <span>
#include <vector>

#include "citykpi/train_config.hpp"

namespace citykpi {

// Adam with bias-corrected moment estimates. One instance owns the moment
// state for one parameter block.
class AdamOptimizer {
 public:
  AdamOptimizer(const AdamConfig& config, std::size_t size);

  // theta -= lr * m_hat / (sqrt(v_hat) + eps), with
  // m_hat = m / (1 - beta1^t), v_hat = v / (1 - beta2^t).
  void Step(std::span<double> params, std::span<const double> grads);
  void Step(double& param, double grad);

  int steps() const { return t_; }

 private:
  AdamConfig config_;
  std::vector<double> m_;
  std::vector<double> v_;
  int t_ = 0;
};

}  // namespace citykpi

#endif  // CITYKPI_MODELS_ADAM_HPP_
