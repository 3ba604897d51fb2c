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

#include "citykpi/analytics.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "citykpi/error.hpp"
#include "citykpi/preprocess.hpp"

namespace citykpi {
namespace {

using nlohmann::json;

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

Moments PopulationMoments(std::span<const double> v) {
  Moments m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m.mean) * (x - m.mean);
  m.std = std::sqrt(ss / static_cast<double>(v.size()));
  return m;
}

}  // namespace

double Pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kLengthMismatch, "series differ in length");
  }
  if (a.size() < 2) {
    throw Error(ErrorCode::kTooFewRows, "correlation needs at least 2 rows");
  }
  const Moments ma = PopulationMoments(a);
  const Moments mb = PopulationMoments(b);
  if (ma.std == 0.0 || mb.std == 0.0) return 0.0;
  double cov = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (a[i] - ma.mean) * (b[i] - mb.mean);
  }
  cov /= static_cast<double>(a.size());
  return std::clamp(cov / (ma.std * mb.std), -1.0, 1.0);
}

CorrelationMatrix PearsonMatrix(const FeatureMatrix& x) {
  if (x.rows() < 2) {
    throw Error(ErrorCode::kTooFewRows, "correlation needs at least 2 rows");
  }
  const std::size_t p = x.cols();
  std::vector<std::vector<double>> columns(p);
  for (std::size_t j = 0; j < p; ++j) columns[j] = x.column(j);

  CorrelationMatrix m;
  m.names = x.feature_names();
  m.values.assign(p, std::vector<double>(p, 0.0));
  for (std::size_t j = 0; j < p; ++j) {
    if (PopulationMoments(columns[j]).std == 0.0) {
      m.constant_columns.push_back(m.names[j]);
    }
    m.values[j][j] = 1.0;
    for (std::size_t k = j + 1; k < p; ++k) {
      const double r = Pearson(columns[j], columns[k]);
      m.values[j][k] = r;
      m.values[k][j] = r;
    }
  }
  return m;
}

GroupSummary GroupMeans(const Dataset& dataset) {
  const auto target = dataset.target_index();
  if (!target) {
    throw Error(ErrorCode::kMissingTarget, "dataset has no target column");
  }
  const auto features = dataset.feature_indices();
  GroupSummary summary;
  summary.feature_names = dataset.feature_names();
  std::array<std::vector<double>, 2> sums;
  sums[0].assign(features.size(), 0.0);
  sums[1].assign(features.size(), 0.0);

  for (const Row& row : dataset.rows()) {
    const bool complete = std::all_of(row.begin(), row.end(),
                                      [](const Cell& c) { return c.has_value(); });
    if (!complete) continue;
    const double t = *row[*target];
    if (t != 0.0 && t != 1.0) {
      throw Error(ErrorCode::kInvalidArgument, "target not in {0,1}");
    }
    const int g = static_cast<int>(t);
    ++summary.groups[g].count;
    for (std::size_t f = 0; f < features.size(); ++f) {
      sums[g][f] += *row[features[f]];
    }
  }
  for (int g = 0; g < 2; ++g) {
    GroupStats& stats = summary.groups[g];
    if (stats.count == 0) continue;
    stats.means.resize(features.size());
    for (std::size_t f = 0; f < features.size(); ++f) {
      stats.means[f] = sums[g][f] / static_cast<double>(stats.count);
    }
  }
  return summary;
}

std::size_t SturgesBinCount(std::size_t n) {
  if (n <= 1) return 1;
  return static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n)))) + 1;
}

Histogram MakeHistogram(std::span<const double> values,
                        std::optional<std::size_t> bin_count) {
  std::vector<double> finite;
  for (double v : values) {
    if (std::isfinite(v)) finite.push_back(v);
  }
  if (finite.empty()) {
    throw Error(ErrorCode::kTooFewValues, "histogram needs a finite value");
  }
  if (bin_count && *bin_count == 0) {
    throw Error(ErrorCode::kInvalidArgument, "bin count must be >= 1");
  }
  const auto [min_it, max_it] = std::minmax_element(finite.begin(), finite.end());
  const double lo = *min_it;
  const double hi = *max_it;

  Histogram h;
  if (lo == hi) {
    h.bin_edges = {lo - 0.5, lo + 0.5};
    h.counts = {finite.size()};
    return h;
  }

  const std::size_t k = bin_count.value_or(SturgesBinCount(finite.size()));
  const double width = (hi - lo) / static_cast<double>(k);
  h.bin_edges.resize(k + 1);
  for (std::size_t i = 0; i < k; ++i) {
    h.bin_edges[i] = lo + width * static_cast<double>(i);
  }
  h.bin_edges[k] = hi;
  h.counts.assign(k, 0);
  for (double v : finite) {
    auto idx = static_cast<std::size_t>(std::floor((v - lo) / width));
    idx = std::min(idx, k - 1);
    // Reconcile with the stored edges so the half-open rule holds exactly.
    while (idx > 0 && v < h.bin_edges[idx]) --idx;
    while (idx + 1 < k && v >= h.bin_edges[idx + 1]) ++idx;
    ++h.counts[idx];
  }
  return h;
}

double Quantile(std::span<const double> values, double q) {
  if (values.empty()) {
    throw Error(ErrorCode::kTooFewValues, "quantile of an empty sample");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = static_cast<double>(sorted.size() - 1) * q;
  const auto below = static_cast<std::size_t>(std::floor(pos));
  const std::size_t above = std::min(below + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(below);
  return sorted[below] + frac * (sorted[above] - sorted[below]);
}

std::vector<std::size_t> IqrOutliers(std::span<const double> values) {
  if (values.size() < 4) {
    throw Error(ErrorCode::kTooFewValues, "IQR screening needs >= 4 values");
  }
  const double q1 = Quantile(values, 0.25);
  const double q3 = Quantile(values, 0.75);
  const double iqr = q3 - q1;
  const double lower = q1 - 1.5 * iqr;
  const double upper = q3 + 1.5 * iqr;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < lower || values[i] > upper) out.push_back(i);
  }
  return out;
}

double NormalQuantileTwoSided(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "confidence must be in (0,1)");
  }
  return boost::math::quantile(boost::math::normal_distribution<double>(),
                               (1.0 + confidence) / 2.0);
}

ForecastResult HoltForecast(std::span<const double> series, std::size_t horizon,
                            double alpha, double beta, double confidence) {
  if (series.size() < 3) {
    throw Error(ErrorCode::kSeriesTooShort, "forecasting needs >= 3 points");
  }
  for (double v : series) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFinite, "series contains a non-finite value");
    }
  }
  if (!(alpha > 0.0 && alpha <= 1.0) || !(beta > 0.0 && beta <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha and beta must be in (0,1]");
  }
  if (horizon < 1) {
    throw Error(ErrorCode::kInvalidArgument, "horizon must be >= 1");
  }
  const double z = NormalQuantileTwoSided(confidence);

  ForecastResult result;
  result.confidence = confidence;
  HoltState& s = result.state;
  s.alpha = alpha;
  s.beta = beta;
  s.level = series[0];
  s.trend = series[1] - series[0];
  for (std::size_t t = 1; t < series.size(); ++t) {
    const double predicted = s.level + s.trend;
    // t == 1 reproduces y1 by construction of the initial trend.
    if (t >= 2) s.residuals.push_back(series[t] - predicted);
    const double level = alpha * series[t] + (1.0 - alpha) * predicted;
    s.trend = beta * (level - s.level) + (1.0 - beta) * s.trend;
    s.level = level;
  }

  result.residual_std = PopulationMoments(s.residuals).std;
  const double base = z * result.residual_std;
  for (std::size_t h = 1; h <= horizon; ++h) {
    ForecastStep step;
    step.horizon = h;
    step.point = s.level + static_cast<double>(h) * s.trend;
    const double half = base * std::sqrt(static_cast<double>(h));
    step.half_width = half;
    step.lower = step.point - half;
    step.upper = step.point + half;
    result.steps.push_back(step);
  }
  return result;
}

json CorrelationToJson(const CorrelationMatrix& m) {
  return {{"names", m.names},
          {"values", m.values},
          {"constant_columns", m.constant_columns}};
}

json GroupSummaryToJson(const GroupSummary& g) {
  json groups = json::object();
  for (int v = 0; v < 2; ++v) {
    const GroupStats& stats = g.groups[v];
    json means = json::object();
    for (std::size_t f = 0; f < stats.means.size(); ++f) {
      means[g.feature_names[f]] = stats.means[f];
    }
    groups[std::to_string(v)] = {
        {"count", stats.count}, {"empty", stats.empty()}, {"means", means}};
  }
  return {{"features", g.feature_names}, {"by_target", groups}};
}

json HistogramToJson(const Histogram& h) {
  return {{"bin_edges", h.bin_edges}, {"counts", h.counts}};
}

json ForecastToJson(const ForecastResult& f) {
  json steps = json::array();
  for (const ForecastStep& s : f.steps) {
    steps.push_back({{"horizon", s.horizon},
                     {"point", s.point},
                     {"lower", s.lower},
                     {"upper", s.upper},
                     {"half_width", s.half_width}});
  }
  return {{"confidence", f.confidence},
          {"alpha", f.state.alpha},
          {"beta", f.state.beta},
          {"level", f.state.level},
          {"trend", f.state.trend},
          {"residual_std", f.residual_std},
          {"steps", std::move(steps)}};
}

json AnalysisReport(const Dataset& dataset) {
  const Dataset clean = DropMissing(dataset);
  const std::size_t n = clean.row_count();
  const std::size_t p = clean.column_count();

  std::vector<std::string> names;
  std::vector<double> values;
  values.reserve(n * p);
  for (const auto& col : clean.schema()) names.push_back(col.name);
  for (const Row& row : clean.rows()) {
    for (const Cell& c : row) values.push_back(*c);
  }
  const FeatureMatrix all(n, p, std::move(values), names);

  json histograms = json::object();
  json outliers = json::object();
  for (std::size_t j = 0; j < p; ++j) {
    const auto column = all.column(j);
    histograms[names[j]] = HistogramToJson(MakeHistogram(column));
    if (column.size() >= 4) {
      const double q1 = Quantile(column, 0.25);
      const double q3 = Quantile(column, 0.75);
      outliers[names[j]] = {{"q1", q1},
                            {"q3", q3},
                            {"lower_fence", q1 - 1.5 * (q3 - q1)},
                            {"upper_fence", q3 + 1.5 * (q3 - q1)},
                            {"indices", IqrOutliers(column)}};
    } else {
      outliers[names[j]] = {{"indices", json::array()},
                            {"skipped", "fewer than 4 values"}};
    }
  }

  json report = {{"rows", n},
                 {"histograms", std::move(histograms)},
                 {"outliers", std::move(outliers)}};
  report["correlations"] =
      n >= 2 ? CorrelationToJson(PearsonMatrix(all)) : json(nullptr);
  report["groups"] = clean.target_index()
                         ? GroupSummaryToJson(GroupMeans(clean))
                         : json(nullptr);
  return report;
}

}  // namespace citykpi
