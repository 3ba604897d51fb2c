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

// Exploratory statistics for the dashboard: correlation heatmap data, group
// averages by governance, histograms, IQR outlier screening and Holt
// linear-trend forecasts with prediction intervals.

#ifndef CITYKPI_ANALYTICS_HPP_
#define CITYKPI_ANALYTICS_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "citykpi/dataset.hpp"
#include "json.hpp"

namespace citykpi {

struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;
  // Columns with zero variance; their off-diagonal entries are 0.
  std::vector<std::string> constant_columns;
};

struct GroupStats {
  std::size_t count = 0;
  std::vector<double> means;  // one per feature; empty when count == 0
  bool empty() const { return count == 0; }
};

struct GroupSummary {
  std::vector<std::string> feature_names;
  std::array<GroupStats, 2> groups;  // indexed by target value
};

struct Histogram {
  std::vector<double> bin_edges;
  std::vector<std::size_t> counts;
};

struct HoltState {
  double alpha = 0.5;
  double beta = 0.3;
  double level = 0.0;
  double trend = 0.0;
  std::vector<double> residuals;  // one-step-ahead errors
};

struct ForecastStep {
  std::size_t horizon = 0;
  double point = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double half_width = 0.0;  // z * s * sqrt(horizon)
};

struct ForecastResult {
  double confidence = 0.95;
  double residual_std = 0.0;
  HoltState state;
  std::vector<ForecastStep> steps;
};

// Pearson correlation with population moments. Throws kTooFewRows if n < 2.
CorrelationMatrix PearsonMatrix(const FeatureMatrix& x);
double Pearson(std::span<const double> a, std::span<const double> b);

// Per-target-value feature means over complete rows of the dataset.
GroupSummary GroupMeans(const Dataset& dataset);

// Sturges' rule: ceil(log2 n) + 1.
std::size_t SturgesBinCount(std::size_t n);

// Equal-width bins over [min, max]; bins are [lo, hi) except the last, which
// is closed. Non-finite inputs are ignored. Constant input gives one bin.
Histogram MakeHistogram(std::span<const double> values,
                        std::optional<std::size_t> bin_count = std::nullopt);

// Linear-interpolation quantile at position (n - 1) q of the sorted values.
double Quantile(std::span<const double> values, double q);

// Indices outside [Q1 - 1.5 IQR, Q3 + 1.5 IQR]. Throws kTooFewValues if n < 4.
std::vector<std::size_t> IqrOutliers(std::span<const double> values);

// Two-sided standard normal quantile for a confidence level in (0, 1).
double NormalQuantileTwoSided(double confidence);

// Holt double exponential smoothing. level0 = y0, trend0 = y1 - y0; forecasts
// level + h trend with bounds +- z s sqrt(h), s being the population standard
// deviation of the one-step residuals from t = 2 on.
ForecastResult HoltForecast(std::span<const double> series, std::size_t horizon,
                            double alpha = 0.5, double beta = 0.3,
                            double confidence = 0.95);

nlohmann::json CorrelationToJson(const CorrelationMatrix& m);
nlohmann::json GroupSummaryToJson(const GroupSummary& g);
nlohmann::json HistogramToJson(const Histogram& h);
nlohmann::json ForecastToJson(const ForecastResult& f);

// {"correlations":{...},"groups":{...},"histograms":{...},"outliers":{...}}
// over the complete rows of `dataset`.
nlohmann::json AnalysisReport(const Dataset& dataset);

}  // namespace citykpi

#endif  // CITYKPI_ANALYTICS_HPP_
