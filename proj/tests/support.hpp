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

// Independent oracles and synthetic data shared by the test binaries. Nothing
// here calls into the library's metric or gradient code.

#ifndef CITYKPI_TESTS_SUPPORT_HPP_
#define CITYKPI_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "citykpi/dataset.hpp"

namespace citykpi::testing {

inline FeatureMatrix Matrix(const std::vector<std::vector<double>>& rows) {
  std::vector<double> values;
  for (const auto& r : rows) values.insert(values.end(), r.begin(), r.end());
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  return FeatureMatrix(rows.size(), cols, std::move(values), {});
}

// Pairwise AUC: P(score_pos > score_neg) + 0.5 P(tie), by enumeration.
inline double PairwiseAuc(const std::vector<int>& y,
                          const std::vector<double>& s) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j] != 0) continue;
      pairs += 1.0;
      if (s[i] > s[j]) wins += 1.0;
      else if (s[i] == s[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

// Definition-based counts for one class read as positive.
struct CountedMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
};

inline CountedMetrics CountDirectly(const std::vector<int>& y_true,
                                    const std::vector<int>& y_pred,
                                    int positive) {
  std::size_t predicted = 0, actual = 0, hit = 0, agree = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_pred[i] == positive) ++predicted;
    if (y_true[i] == positive) ++actual;
    if (y_pred[i] == positive && y_true[i] == positive) ++hit;
    if (y_pred[i] == y_true[i]) ++agree;
  }
  CountedMetrics m;
  m.precision = predicted == 0 ? 0.0 : double(hit) / double(predicted);
  m.recall = actual == 0 ? 0.0 : double(hit) / double(actual);
  // 2PR/(P+R) rewritten over counts: 2 hit / (predicted + actual).
  m.f1 = (predicted + actual == 0 || hit == 0)
             ? 0.0
             : 2.0 * double(hit) / double(predicted + actual);
  m.accuracy = double(agree) / double(y_true.size());
  return m;
}

// Central differences of f around params; returns max relative error
// against `analytic` with |a - f| / max(|a|, |f|, floor).
inline double MaxRelativeError(
    std::vector<double> params, const std::vector<double>& analytic,
    const std::function<double(const std::vector<double>&)>& f,
    double step = 1e-6, double floor = 1e-6) {
  double worst = 0.0;
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double saved = params[k];
    params[k] = saved + step;
    const double up = f(params);
    params[k] = saved - step;
    const double down = f(params);
    params[k] = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double denom =
        std::max({std::abs(analytic[k]), std::abs(numeric), floor});
    worst = std::max(worst, std::abs(analytic[k] - numeric) / denom);
  }
  return worst;
}

inline double TrueSigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Samples from a known logistic model with standard normal features.
struct LogisticTruth {
  double beta0 = 0.25;
  std::vector<double> beta{1.5, -2.0, 0.75};
};

struct Sample {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  std::vector<double> p;  // true P(y = 1 | x)
};

inline Sample DrawLogistic(const LogisticTruth& truth, std::size_t n,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Sample s;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(truth.beta.size());
    double z = truth.beta0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      x[j] = normal(rng);
      z += truth.beta[j] * x[j];
    }
    const double p = TrueSigmoid(z);
    s.x.push_back(std::move(x));
    s.p.push_back(p);
    s.y.push_back(unit(rng) < p ? 1 : 0);
  }
  return s;
}

// Linearly separable data: label = [w.x + b > 0] with a margin of at least
// `gap` around the hyperplane.
inline Sample DrawSeparable(std::size_t n, std::size_t p, std::uint64_t seed,
                            double gap = 0.5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-3.0, 3.0);
  std::vector<double> w(p);
  for (std::size_t j = 0; j < p; ++j) w[j] = (j % 2 == 0 ? 1.0 : -0.5);
  double norm = 0.0;
  for (double v : w) norm += v * v;
  norm = std::sqrt(norm);
  Sample s;
  while (s.y.size() < n) {
    std::vector<double> x(p);
    double z = 0.2;
    for (std::size_t j = 0; j < p; ++j) {
      x[j] = box(rng);
      z += w[j] * x[j];
    }
    if (std::abs(z) / norm < gap) continue;
    s.x.push_back(std::move(x));
    s.y.push_back(z > 0 ? 1 : 0);
  }
  return s;
}

// Separable along feature 0 with the boundary at 0: |x0| in [gap, 3], the
// label is [x0 > 0], other features are uniform noise. A split at the origin
// is representable by every model kind, binarized Bayes included.
inline Sample DrawAxisSeparable(std::size_t n, std::size_t p,
                                std::uint64_t seed, double gap = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> magnitude(gap, 3.0);
  std::uniform_real_distribution<double> box(-3.0, 3.0);
  Sample s;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(p);
    const int label = static_cast<int>(i % 2);
    x[0] = label ? magnitude(rng) : -magnitude(rng);
    for (std::size_t j = 1; j < p; ++j) x[j] = box(rng);
    s.x.push_back(std::move(x));
    s.y.push_back(label);
  }
  return s;
}

inline Dataset ToDataset(const Sample& s, const std::string& target = "governance") {
  std::vector<ColumnSchema> schema;
  const std::size_t p = s.x.empty() ? 0 : s.x.front().size();
  for (std::size_t j = 0; j < p; ++j) {
    schema.push_back({"f" + std::to_string(j), ColumnRole::kFeature, {}});
  }
  schema.push_back({target, ColumnRole::kTarget, {}});
  std::vector<Row> rows;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    Row row(s.x[i].begin(), s.x[i].end());
    row.emplace_back(double(s.y[i]));
    rows.push_back(std::move(row));
  }
  return Dataset(std::move(schema), std::move(rows));
}

// The five head rows of the Edmonton KPI table.
inline Dataset EdmontonHead() {
  const std::vector<std::string> names = {
      "UNEMPLOYMENT_RATE",
      "National_Unemployment_Rate",
      "Impaired Driving Incidents",
      "90_RIGHT_ENERGY",
      "Edmonton CMA - Working Age Population Growth",
      "Edmonton CMA - Labour Force Growth",
      "Edmonton CMA - Employment Growth",
      "governance"};
  std::vector<ColumnSchema> schema;
  for (const auto& n : names) schema.push_back({n, ColumnRole::kFeature, {}});
  schema.back().role = ColumnRole::kTarget;
  const std::vector<std::vector<double>> table = {
      {7.1, 8.4, 454.0, 895.67, 1.8, 1.3, -1.6, 1},
      {7.2, 8.4, 517.0, 875.08, 1.7, 0.4, -1.9, 0},
      {7.5, 8.3, 468.0, 1077.25, 1.6, -0.7, -3.1, 0},
      {7.7, 8.3, 632.0, 824.25, 1.6, -0.4, -2.9, 0},
      {7.4, 8.2, 464.0, 1197.25, 1.5, -0.2, -0.7, 1}};
  std::vector<Row> rows;
  for (const auto& r : table) rows.emplace_back(r.begin(), r.end());
  return Dataset(std::move(schema), std::move(rows));
}

// An Edmonton-shaped table with `complete` full rows and `partial` rows that
// carry MISSING cells, values loosely following the head rows.
inline Dataset EdmontonLike(std::size_t complete, std::size_t partial,
                            std::uint64_t seed) {
  Dataset head = EdmontonHead();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<Row> rows;
  const std::size_t total = complete + partial;
  std::size_t placed = 0;
  for (std::size_t i = 0; i < total; ++i) {
    const double u = 7.0 + 0.4 * noise(rng);
    const double energy = 950.0 + 150.0 * noise(rng);
    const double labour = 0.3 * noise(rng);
    Row row = {u,
               8.2 + 0.2 * noise(rng),
               500.0 + 60.0 * noise(rng),
               energy,
               1.6 + 0.1 * noise(rng),
               labour,
               -2.0 + noise(rng)};
    const double z = -1.2 * (u - 7.0) + 0.004 * (energy - 950.0) + labour +
                     0.5 * noise(rng);
    row.emplace_back(z > 0 ? 1.0 : 0.0);
    // Spread the partial rows through the table.
    if (partial > 0 && i % std::max<std::size_t>(2, total / partial) == 1 &&
        placed < partial) {
      row[i % 7].reset();
      ++placed;
    }
    rows.push_back(std::move(row));
  }
  return Dataset(head.schema(), std::move(rows));
}

}  // namespace citykpi::testing

#endif  // CITYKPI_TESTS_SUPPORT_HPP_
