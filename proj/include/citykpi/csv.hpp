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

#ifndef CITYKPI_CSV_HPP_
#define CITYKPI_CSV_HPP_

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "citykpi/dataset.hpp"

namespace citykpi {

// Splits RFC 4180 style CSV text into records. Quoted fields may contain
// commas, doubled quotes and newlines.
std::vector<std::vector<std::string>> ParseCsvRecords(std::istream& in);

// Reads a KPI table. The first record is the header. Empty fields and the
// literal "NaN" become MISSING; anything else must parse as a finite number.
//
// Roles come from `schema` when given (columns it does not mention are
// features); otherwise the last column is the target.
Dataset ReadCsvDataset(std::istream& in,
                       const std::optional<std::vector<ColumnSchema>>& schema =
                           std::nullopt);
Dataset ReadCsvDatasetFile(const std::string& path,
                           const std::optional<std::vector<ColumnSchema>>&
                               schema = std::nullopt);

}  // namespace citykpi

#endif  // CITYKPI_CSV_HPP_
