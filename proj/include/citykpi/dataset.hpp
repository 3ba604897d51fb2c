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

// Canonical data model: column schema, KPI datasets with explicit missing
// cells, dense feature matrices and binary label vectors.

#ifndef CITYKPI_DATASET_HPP_
#define CITYKPI_DATASET_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace citykpi {

enum class ColumnRole { kFeature, kTarget };

struct ColumnSchema {
  std::string name;
  ColumnRole role = ColumnRole::kFeature;
  std::optional<std::string> unit;

  bool operator==(const ColumnSchema&) const = default;
};

// A cell is either a finite real or MISSING (std::nullopt).
using Cell = std::optional<double>;
using Row = std::vector<Cell>;

// Ordered KPI records. The constructor stores what it is given; use
// ValidateDataset() to check the invariants.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<ColumnSchema> schema, std::vector<Row> rows)
      : schema_(std::move(schema)), rows_(std::move(rows)) {}

  const std::vector<ColumnSchema>& schema() const { return schema_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t row_count() const { return rows_.size(); }
  std::size_t column_count() const { return schema_.size(); }

  // Index of the single target column, if exactly one exists.
  std::optional<std::size_t> target_index() const;
  std::optional<std::size_t> column_index(std::string_view name) const;
  std::vector<std::size_t> feature_indices() const;
  std::vector<std::string> feature_names() const;

  // Number of MISSING cells per column, in schema order.
  std::vector<std::size_t> missing_counts() const;

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<ColumnSchema> schema_;
  std::vector<Row> rows_;
};

struct Violation {
  std::optional<std::size_t> row;  // absent for schema-level rules
  std::optional<std::size_t> column;
  std::string rule;

  bool operator==(const Violation&) const = default;
};

// Returns an empty list iff every Dataset invariant holds.
std::vector<Violation> ValidateDataset(const Dataset& dataset);

// Row-major n x p matrix of finite reals.
class FeatureMatrix {
 public:
  FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                std::vector<std::string> feature_names);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  std::vector<double> column(std::size_t c) const;
  const std::vector<double>& values() const { return values_; }
  const std::vector<std::string>& feature_names() const {
    return feature_names_;
  }

  FeatureMatrix SelectRows(std::span<const std::size_t> indices) const;

  bool operator==(const FeatureMatrix&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
  std::vector<std::string> feature_names_;
};

class LabelVector {
 public:
  explicit LabelVector(std::vector<int> labels);

  std::size_t size() const { return labels_.size(); }
  int operator[](std::size_t i) const { return labels_[i]; }
  const std::vector<int>& labels() const { return labels_; }
  std::size_t count(int label) const;

  LabelVector SelectRows(std::span<const std::size_t> indices) const;

  bool operator==(const LabelVector&) const = default;

 private:
  std::vector<int> labels_;
};

struct Split {
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
  std::uint64_t seed = 0;
  double test_fraction = 0.0;

  bool operator==(const Split&) const = default;
};

std::string_view ColumnRoleName(ColumnRole role);
ColumnRole ParseColumnRole(std::string_view name);

// Canonical dataset JSON:
//   {"schema":[{"name","role","unit"}...],"rows":[[number|null,...],...]}
nlohmann::json DatasetToJson(const Dataset& dataset);
Dataset DatasetFromJson(const nlohmann::json& json);

std::vector<ColumnSchema> SchemaFromJson(const nlohmann::json& json);

Dataset LoadDatasetFile(const std::string& path);
void SaveDatasetFile(const Dataset& dataset, const std::string& path);

}  // namespace citykpi

#endif  // CITYKPI_DATASET_HPP_
