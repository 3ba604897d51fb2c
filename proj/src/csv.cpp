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

#include "citykpi/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>

#include "citykpi/error.hpp"

namespace citykpi {
namespace {

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

Cell ParseCell(const std::string& raw, std::size_t line, std::size_t column) {
  const std::string text = Trim(raw);
  if (text.empty() || text == "NaN") return std::nullopt;
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw Error(ErrorCode::kMalformedInput,
                "line " + std::to_string(line) + ", column " +
                    std::to_string(column + 1) + ": '" + text +
                    "' is not a finite number");
  }
  return value;
}

}  // namespace

std::vector<std::vector<std::string>> ParseCsvRecords(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;

  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    // A blank line is not a record.
    if (!(record.size() == 1 && record[0].empty() && !field_started)) {
      records.push_back(std::move(record));
    }
    record.clear();
    field_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        break;
      default:
        field.push_back(ch);
        field_started = true;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::kMalformedInput, "unterminated quoted field");
  }
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

Dataset ReadCsvDataset(std::istream& in,
                       const std::optional<std::vector<ColumnSchema>>& schema) {
  const auto records = ParseCsvRecords(in);
  if (records.empty()) {
    throw Error(ErrorCode::kMalformedInput, "CSV input is empty");
  }
  const auto& header = records.front();
  std::vector<ColumnSchema> columns;
  for (const auto& raw : header) {
    ColumnSchema col;
    col.name = Trim(raw);
    if (col.name.empty()) {
      throw Error(ErrorCode::kMalformedInput, "CSV header has an empty name");
    }
    columns.push_back(std::move(col));
  }

  if (schema) {
    for (const ColumnSchema& sidecar : *schema) {
      bool matched = false;
      for (ColumnSchema& col : columns) {
        if (col.name == sidecar.name) {
          col.role = sidecar.role;
          col.unit = sidecar.unit;
          matched = true;
        }
      }
      if (!matched) {
        throw Error(ErrorCode::kMalformedInput,
                    "schema names column '" + sidecar.name +
                        "' which is not in the CSV header");
      }
    }
  } else {
    columns.back().role = ColumnRole::kTarget;
  }

  std::vector<Row> rows;
  rows.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& record = records[r];
    if (record.size() != columns.size()) {
      throw Error(ErrorCode::kMalformedInput,
                  "line " + std::to_string(r + 1) + " has " +
                      std::to_string(record.size()) + " fields, expected " +
                      std::to_string(columns.size()));
    }
    Row row;
    row.reserve(record.size());
    for (std::size_t c = 0; c < record.size(); ++c) {
      row.push_back(ParseCell(record[c], r + 1, c));
    }
    rows.push_back(std::move(row));
  }
  return Dataset(std::move(columns), std::move(rows));
}

Dataset ReadCsvDatasetFile(
    const std::string& path,
    const std::optional<std::vector<ColumnSchema>>& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open " + path);
  return ReadCsvDataset(in, schema);
}

}  // namespace citykpi
