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

// citykpi: batch driver for ingest, model comparison, forecasting and the
// HTTP service.
//
// Exit codes: 0 success, 1 data error, 2 usage error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "citykpi/analytics.hpp"
#include "citykpi/csv.hpp"
#include "citykpi/dataset.hpp"
#include "citykpi/error.hpp"
#include "citykpi/pipeline.hpp"
#include "citykpi/service.hpp"
#include "httplib.h"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct IngestArgs {
  std::string input;
  std::string schema;
  std::string out;
};

struct CompareArgs {
  std::string dataset;
  std::uint64_t seed = 0;
  double test_fraction = 0.3;
  bool json = false;
};

struct ForecastArgs {
  std::string dataset;
  std::string column;
  std::size_t horizon = 1;
  double confidence = 0.95;
  bool plot_data = false;
};

struct ServeArgs {
  std::string dataset;
  std::string models_dir = "models";
  std::string addr;
};

std::string Fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

int RunIngest(const IngestArgs& args) {
  std::optional<std::vector<citykpi::ColumnSchema>> schema;
  if (!args.schema.empty()) {
    std::ifstream in(args.schema);
    if (!in) {
      throw citykpi::Error(citykpi::ErrorCode::kMalformedInput,
                           "cannot open schema " + args.schema);
    }
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw citykpi::Error(citykpi::ErrorCode::kMalformedInput,
                           "schema is not JSON: " + std::string(e.what()));
    }
    schema = citykpi::SchemaFromJson(j);
  }
  const citykpi::Dataset data = citykpi::ReadCsvDatasetFile(args.input, schema);
  const auto violations = citykpi::ValidateDataset(data);
  if (!violations.empty()) {
    for (const auto& v : violations) {
      std::cerr << "invalid: " << v.rule;
      if (v.row) std::cerr << " (row " << *v.row << ")";
      if (v.column) std::cerr << " (column " << *v.column << ")";
      std::cerr << '\n';
    }
    return kExitData;
  }
  citykpi::SaveDatasetFile(data, args.out);

  std::cout << data.row_count() << " rows, " << data.column_count()
            << " columns\n";
  std::size_t width = 6;
  for (const auto& c : data.schema()) width = std::max(width, c.name.size());
  const auto missing = data.missing_counts();
  std::cout << std::left;
  std::cout.width(static_cast<std::streamsize>(width + 2));
  std::cout << "column" << "missing\n";
  for (std::size_t c = 0; c < data.column_count(); ++c) {
    std::cout.width(static_cast<std::streamsize>(width + 2));
    std::cout << data.schema()[c].name << missing[c] << '\n';
  }
  return kExitOk;
}

int RunCompare(const CompareArgs& args) {
  const citykpi::Dataset data = citykpi::LoadDatasetFile(args.dataset);
  const citykpi::Comparison result = citykpi::CompareModels(
      data, args.seed, args.test_fraction, citykpi::TrainConfig{});
  if (args.json) {
    std::cout << citykpi::ComparisonToJson(result).dump(2) << '\n';
  } else {
    std::cout << citykpi::FormatComparisonTable(result);
  }
  return kExitOk;
}

int RunForecast(const ForecastArgs& args) {
  const citykpi::Dataset data = citykpi::LoadDatasetFile(args.dataset);
  const auto index = data.column_index(args.column);
  if (!index) {
    throw citykpi::Error(citykpi::ErrorCode::kNotFound,
                         "unknown column '" + args.column + "'");
  }
  std::vector<double> series;
  std::vector<std::size_t> times;
  for (std::size_t r = 0; r < data.row_count(); ++r) {
    if (const auto& cell = data.rows()[r][*index]) {
      series.push_back(*cell);
      times.push_back(r);
    }
  }
  const citykpi::ForecastResult f =
      citykpi::HoltForecast(series, args.horizon, 0.5, 0.3, args.confidence);

  if (args.plot_data) {
    json history = json::array();
    for (std::size_t i = 0; i < series.size(); ++i) {
      history.push_back({{"t", times[i]}, {"value", series[i]}});
    }
    const std::size_t last = data.row_count() == 0 ? 0 : data.row_count() - 1;
    json forecast = json::array();
    for (const auto& s : f.steps) {
      forecast.push_back({{"t", last + s.horizon},
                          {"value", s.point},
                          {"lower", s.lower},
                          {"upper", s.upper}});
    }
    std::cout << json{{"column", args.column},
                      {"confidence", f.confidence},
                      {"history", std::move(history)},
                      {"forecast", std::move(forecast)}}
                     .dump(2)
              << '\n';
    return kExitOk;
  }

  std::cout << "column " << args.column << ", confidence "
            << Fixed(f.confidence, 2) << ", residual std "
            << Fixed(f.residual_std) << '\n';
  std::cout << "h  point  lower  upper\n";
  for (const auto& s : f.steps) {
    std::cout << s.horizon << "  " << Fixed(s.point) << "  " << Fixed(s.lower)
              << "  " << Fixed(s.upper) << '\n';
  }
  return kExitOk;
}

int RunServe(const ServeArgs& args) {
  citykpi::ServiceConfig config;
  config.dataset_path = args.dataset;
  config.models_dir = args.models_dir;
  if (!args.addr.empty()) {
    citykpi::ApplyListenAddress(config, args.addr);
  } else if (const char* env = std::getenv("CITYKPI_ADDR")) {
    citykpi::ApplyListenAddress(config, env);
  }
  citykpi::KpiService service(config);
  httplib::Server server;
  service.Mount(server);
  std::cerr << "listening on " << config.host << ':' << config.port << '\n';
  if (!server.listen(config.host, config.port)) {
    std::cerr << "error: cannot listen on " << config.host << ':'
              << config.port << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"citykpi: city KPI analytics engine"};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Convert a CSV table to dataset JSON");
  ingest_cmd->add_option("--input", ingest.input, "CSV file")->required();
  ingest_cmd->add_option("--schema", ingest.schema, "Schema JSON assigning roles");
  ingest_cmd->add_option("--out", ingest.out, "Output dataset JSON")->required();

  CompareArgs compare;
  if (const char* env = std::getenv("CITYKPI_SEED")) {
    try {
      std::size_t used = 0;
      compare.seed = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      std::cerr << "error: CITYKPI_SEED must be a non-negative integer\n";
      return kExitUsage;
    }
  }
  auto* compare_cmd = app.add_subcommand("compare", "Train and compare all five classifiers");
  compare_cmd->add_option("--dataset", compare.dataset, "Dataset JSON")->required();
  compare_cmd->add_option("--seed", compare.seed, "Split seed")->capture_default_str();
  compare_cmd->add_option("--test-fraction", compare.test_fraction,
                          "Held-out fraction")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  compare_cmd->add_flag("--json", compare.json, "Emit JSON");

  ForecastArgs forecast;
  auto* forecast_cmd = app.add_subcommand("forecast", "Holt forecast of one column");
  forecast_cmd->add_option("--dataset", forecast.dataset, "Dataset JSON")->required();
  forecast_cmd->add_option("--column", forecast.column, "Column name")->required();
  forecast_cmd->add_option("--horizon", forecast.horizon, "Steps ahead")
      ->required()
      ->check(CLI::PositiveNumber);
  forecast_cmd->add_option("--confidence", forecast.confidence, "Interval level")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  forecast_cmd->add_flag("--plot-data", forecast.plot_data,
                         "Emit (t, value) series JSON");

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  serve_cmd->add_option("--dataset", serve.dataset, "Dataset JSON to load");
  serve_cmd->add_option("--models-dir", serve.models_dir, "Model store")
      ->capture_default_str();
  serve_cmd->add_option("--addr", serve.addr, "host:port (default CITYKPI_ADDR)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*ingest_cmd) return RunIngest(ingest);
    if (*compare_cmd) return RunCompare(compare);
    if (*forecast_cmd) return RunForecast(forecast);
    if (*serve_cmd) return RunServe(serve);
  } catch (const citykpi::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == citykpi::ErrorCode::kInvalidArgument &&
                   serve_cmd->parsed()
               ? kExitUsage
               : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
