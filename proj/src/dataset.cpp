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

#include "citykpi/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "citykpi/error.hpp"

namespace citykpi {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kMalformedInput: return "MalformedInput";
    case ErrorCode::kEmptyResult: return "EmptyResult";
    case ErrorCode::kMissingTarget: return "MissingTarget";
    case ErrorCode::kBadFraction: return "BadFraction";
    case ErrorCode::kWidthMismatch: return "WidthMismatch";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kEmptyMatrix: return "EmptyMatrix";
    case ErrorCode::kZeroWeights: return "ZeroWeights";
    case ErrorCode::kTooFewRows: return "TooFewRows";
    case ErrorCode::kTooFewValues: return "TooFewValues";
    case ErrorCode::kSeriesTooShort: return "SeriesTooShort";
    case ErrorCode::kNotFound: return "NotFound";
  }
  return "Unknown";
}

std::optional<std::size_t> Dataset::target_index() const {
  std::optional<std::size_t> found;
  for (std::size_t c = 0; c < schema_.size(); ++c) {
    if (schema_[c].role != ColumnRole::kTarget) continue;
    if (found) return std::nullopt;
    found = c;
  }
  return found;
}

std::optional<std::size_t> Dataset::column_index(std::string_view name) const {
  for (std::size_t c = 0; c < schema_.size(); ++c) {
    if (schema_[c].name == name) return c;
  }
  return std::nullopt;
}

std::vector<std::size_t> Dataset::feature_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < schema_.size(); ++c) {
    if (schema_[c].role == ColumnRole::kFeature) out.push_back(c);
  }
  return out;
}

std::vector<std::string> Dataset::feature_names() const {
  std::vector<std::string> out;
  for (std::size_t c : feature_indices()) out.push_back(schema_[c].name);
  return out;
}

std::vector<std::size_t> Dataset::missing_counts() const {
  std::vector<std::size_t> counts(schema_.size(), 0);
  for (const Row& row : rows_) {
    for (std::size_t c = 0; c < row.size() && c < counts.size(); ++c) {
      if (!row[c]) ++counts[c];
    }
  }
  return counts;
}

std::vector<Violation> ValidateDataset(const Dataset& dataset) {
  std::vector<Violation> out;
  const auto& schema = dataset.schema();

  std::set<std::string> seen;
  std::size_t targets = 0;
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (schema[c].name.empty()) {
      out.push_back({std::nullopt, c, "empty column name"});
    } else if (!seen.insert(schema[c].name).second) {
      out.push_back({std::nullopt, c, "duplicate column name"});
    }
    if (schema[c].role == ColumnRole::kTarget) ++targets;
  }
  if (targets > 1) {
    out.push_back({std::nullopt, std::nullopt, "more than one target column"});
  }

  for (std::size_t r = 0; r < dataset.row_count(); ++r) {
    const Row& row = dataset.rows()[r];
    if (row.size() != schema.size()) {
      out.push_back({r, std::nullopt, "row width does not match schema"});
      continue;
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!row[c]) continue;
      const double v = *row[c];
      if (!std::isfinite(v)) {
        out.push_back({r, c, "non-finite value"});
      } else if (schema[c].role == ColumnRole::kTarget && v != 0.0 &&
                 v != 1.0) {
        out.push_back({r, c, "target not in {0,1}"});
      }
    }
  }
  return out;
}

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols,
                             std::vector<double> values,
                             std::vector<std::string> feature_names)
    : rows_(rows),
      cols_(cols),
      values_(std::move(values)),
      feature_names_(std::move(feature_names)) {
  if (rows_ == 0 || cols_ == 0) {
    throw Error(ErrorCode::kEmptyMatrix, "feature matrix must be at least 1x1");
  }
  if (values_.size() != rows_ * cols_) {
    throw Error(ErrorCode::kWidthMismatch,
                "feature matrix value count does not match its shape");
  }
  if (feature_names_.empty()) {
    for (std::size_t c = 0; c < cols_; ++c) {
      feature_names_.push_back("x" + std::to_string(c));
    }
  }
  if (feature_names_.size() != cols_) {
    throw Error(ErrorCode::kWidthMismatch,
                "feature name count does not match column count");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFinite, "feature matrix entry is not finite");
    }
  }
}

std::vector<double> FeatureMatrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

FeatureMatrix FeatureMatrix::SelectRows(
    std::span<const std::size_t> indices) const {
  std::vector<double> values;
  values.reserve(indices.size() * cols_);
  for (std::size_t r : indices) {
    if (r >= rows_) throw Error(ErrorCode::kInvalidArgument, "row out of range");
    auto src = row(r);
    values.insert(values.end(), src.begin(), src.end());
  }
  return FeatureMatrix(indices.size(), cols_, std::move(values),
                       feature_names_);
}

LabelVector::LabelVector(std::vector<int> labels) : labels_(std::move(labels)) {
  for (int v : labels_) {
    if (v != 0 && v != 1) {
      throw Error(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
    }
  }
}

std::size_t LabelVector::count(int label) const {
  return static_cast<std::size_t>(
      std::count(labels_.begin(), labels_.end(), label));
}

LabelVector LabelVector::SelectRows(std::span<const std::size_t> indices) const {
  std::vector<int> out;
  out.reserve(indices.size());
  for (std::size_t r : indices) {
    if (r >= labels_.size()) {
      throw Error(ErrorCode::kInvalidArgument, "row out of range");
    }
    out.push_back(labels_[r]);
  }
  return LabelVector(std::move(out));
}

std::string_view ColumnRoleName(ColumnRole role) {
  return role == ColumnRole::kTarget ? "target" : "feature";
}

ColumnRole ParseColumnRole(std::string_view name) {
  if (name == "feature") return ColumnRole::kFeature;
  if (name == "target") return ColumnRole::kTarget;
  throw Error(ErrorCode::kMalformedInput,
              "unknown column role '" + std::string(name) + "'");
}

nlohmann::json DatasetToJson(const Dataset& dataset) {
  nlohmann::json schema = nlohmann::json::array();
  for (const ColumnSchema& col : dataset.schema()) {
    schema.push_back({{"name", col.name},
                      {"role", ColumnRoleName(col.role)},
                      {"unit", col.unit ? nlohmann::json(*col.unit)
                                        : nlohmann::json(nullptr)}});
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const Row& row : dataset.rows()) {
    nlohmann::json out = nlohmann::json::array();
    for (const Cell& cell : row) {
      out.push_back(cell ? nlohmann::json(*cell) : nlohmann::json(nullptr));
    }
    rows.push_back(std::move(out));
  }
  return {{"schema", std::move(schema)}, {"rows", std::move(rows)}};
}

std::vector<ColumnSchema> SchemaFromJson(const nlohmann::json& json) {
  const nlohmann::json* columns = &json;
  if (json.is_object()) {
    if (!json.contains("schema")) {
      throw Error(ErrorCode::kMalformedInput, "schema JSON lacks 'schema'");
    }
    columns = &json.at("schema");
  }
  if (!columns->is_array()) {
    throw Error(ErrorCode::kMalformedInput, "schema must be an array");
  }
  std::vector<ColumnSchema> out;
  for (const auto& col : *columns) {
    if (!col.is_object() || !col.contains("name") ||
        !col.at("name").is_string()) {
      throw Error(ErrorCode::kMalformedInput, "schema column lacks a name");
    }
    ColumnSchema schema;
    schema.name = col.at("name").get<std::string>();
    if (col.contains("role") && !col.at("role").is_null()) {
      schema.role = ParseColumnRole(col.at("role").get<std::string>());
    }
    if (col.contains("unit") && col.at("unit").is_string()) {
      schema.unit = col.at("unit").get<std::string>();
    }
    out.push_back(std::move(schema));
  }
  return out;
}

Dataset DatasetFromJson(const nlohmann::json& json) {
  if (!json.is_object() || !json.contains("schema") || !json.contains("rows")) {
    throw Error(ErrorCode::kMalformedInput,
                "dataset JSON needs 'schema' and 'rows'");
  }
  auto schema = SchemaFromJson(json.at("schema"));
  const auto& rows_json = json.at("rows");
  if (!rows_json.is_array()) {
    throw Error(ErrorCode::kMalformedInput, "'rows' must be an array");
  }
  std::vector<Row> rows;
  rows.reserve(rows_json.size());
  for (const auto& row_json : rows_json) {
    if (!row_json.is_array()) {
      throw Error(ErrorCode::kMalformedInput, "each row must be an array");
    }
    Row row;
    row.reserve(row_json.size());
    for (const auto& cell : row_json) {
      if (cell.is_null()) {
        row.emplace_back(std::nullopt);
      } else if (cell.is_number()) {
        row.emplace_back(cell.get<double>());
      } else {
        throw Error(ErrorCode::kMalformedInput,
                    "cells must be numbers or null");
      }
    }
    rows.push_back(std::move(row));
  }
  return Dataset(std::move(schema), std::move(rows));
}

Dataset LoadDatasetFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kNotFound, "cannot open dataset file " + path);
  }
  nlohmann::json json;
  try {
    json = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kMalformedInput,
                "dataset file is not valid JSON: " + std::string(e.what()));
  }
  return DatasetFromJson(json);
}

void SaveDatasetFile(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
  }
  out << DatasetToJson(dataset).dump() << '\n';
}

}  // namespace citykpi
