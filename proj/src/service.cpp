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

#include "citykpi/service.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "citykpi/analytics.hpp"
#include "citykpi/preprocess.hpp"
#include "httplib.h"

namespace citykpi {
namespace {

using nlohmann::json;

std::optional<double> ParseReal(const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<long long> ParseInteger(const std::string& text) {
  long long value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

ApiResponse FromError(const Error& e) {
  return ErrorResponse(HttpStatusFor(e.code()), ErrorCodeName(e.code()),
                       e.what());
}

ApiResponse NoDataset() {
  return ErrorResponse(503, "NoDataset", "no dataset is loaded");
}

json ModelListing(const TrainingRun& run) {
  const Evaluation& e = run.evaluation;
  return {{"id", run.id},
          {"kind", ModelKindName(run.model.kind)},
          {"seed", run.split.seed},
          {"test_fraction", run.split.test_fraction},
          {"test_size", run.test_labels.size()},
          {"accuracy", e.report.accuracy},
          {"precision", e.report.per_class[1].precision},
          {"log_loss", e.log_loss},
          {"auc", e.roc ? json(e.roc->auc) : json(nullptr)},
          {"trained_at", run.model.trained_at}};
}

void Reply(httplib::Response& res, const ApiResponse& api) {
  res.status = api.status;
  res.set_content(api.body.dump(), "application/json");
}

}  // namespace

void ServiceConfig::Validate() const {
  if (port < 1 || port > 65535) {
    throw Error(ErrorCode::kInvalidArgument, "port must be in 1..65535");
  }
  if (!(default_test_fraction > 0.0 && default_test_fraction < 1.0)) {
    throw Error(ErrorCode::kBadFraction, "default test fraction must be in (0,1)");
  }
  if (models_dir.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "models directory is required");
  }
}

void ApplyListenAddress(ServiceConfig& config, const std::string& address) {
  const auto colon = address.rfind(':');
  const std::string port_text =
      colon == std::string::npos ? address : address.substr(colon + 1);
  const auto port = ParseInteger(port_text);
  if (!port || *port < 1 || *port > 65535) {
    throw Error(ErrorCode::kInvalidArgument,
                "bad listen address '" + address + "'");
  }
  if (colon != std::string::npos && colon > 0) {
    config.host = address.substr(0, colon);
  }
  config.port = static_cast<int>(*port);
}

std::string_view JobKindName(JobKind kind) {
  switch (kind) {
    case JobKind::kTrain: return "train";
    case JobKind::kEvaluate: return "evaluate";
    case JobKind::kForecast: return "forecast";
  }
  return "unknown";
}

std::string_view JobStatusName(JobStatus status) {
  switch (status) {
    case JobStatus::kQueued: return "queued";
    case JobStatus::kRunning: return "running";
    case JobStatus::kDone: return "done";
    case JobStatus::kFailed: return "failed";
  }
  return "unknown";
}

json JobToJson(const JobRecord& job) {
  json j = {{"id", job.id},
            {"kind", JobKindName(job.kind)},
            {"status", JobStatusName(job.status)},
            {"result", job.result.empty() ? json(nullptr) : json(job.result)}};
  if (!job.error.empty()) j["error"] = job.error;
  return j;
}

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kEmptyResult:
    case ErrorCode::kMissingTarget:
    case ErrorCode::kNonFinite:
    case ErrorCode::kSingleClass:
    case ErrorCode::kTooFewRows:
    case ErrorCode::kTooFewValues:
    case ErrorCode::kSeriesTooShort:
    case ErrorCode::kEmptyMatrix:
      return 422;
    default:
      return 400;
  }
}

ApiResponse ErrorResponse(int status, std::string_view code,
                          const std::string& message) {
  return {status, {{"error", {{"code", code}, {"message", message}}}}};
}

ModelStore::ModelStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path ModelStore::PathFor(const std::string& id) const {
  // Ids are generated as kind-seed-hex; refuse anything that could escape
  // the directory.
  const bool safe = !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
  });
  if (!safe) throw Error(ErrorCode::kNotFound, "unknown model id");
  return dir_ / (id + ".json");
}

void ModelStore::Save(const TrainingRun& run) const {
  const auto path = PathFor(run.id);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + tmp);
    out << TrainingRunToJson(run).dump() << '\n';
  }
  std::filesystem::rename(tmp, path);
}

std::optional<TrainingRun> ModelStore::Load(const std::string& id) const {
  std::filesystem::path path;
  try {
    path = PathFor(id);
  } catch (const Error&) {
    return std::nullopt;
  }
  std::ifstream in(path);
  if (!in) return std::nullopt;
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformedInput,
                "model file " + path.string() + " is not JSON");
  }
  return TrainingRunFromJson(j);
}

std::vector<std::string> ModelStore::List() const {
  std::vector<std::string> ids;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      ids.push_back(entry.path().stem().string());
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

KpiService::KpiService(ServiceConfig config)
    : config_(std::move(config)), store_(config_.models_dir) {
  config_.Validate();
  if (!config_.dataset_path.empty()) {
    SetDataset(LoadDatasetFile(config_.dataset_path));
  }
  for (const std::string& id : store_.List()) {
    try {
      if (auto run = store_.Load(id)) {
        models_[id] = std::make_shared<const TrainingRun>(std::move(*run));
      }
    } catch (const Error&) {
      // Unreadable files stay on disk but are not served.
    }
  }
}

KpiService::~KpiService() { WaitForJobs(); }

void KpiService::SetDataset(Dataset dataset) {
  auto next = std::make_shared<const Dataset>(std::move(dataset));
  std::unique_lock lock(dataset_mutex_);
  dataset_ = std::move(next);
}

std::shared_ptr<const Dataset> KpiService::dataset() const {
  std::shared_lock lock(dataset_mutex_);
  return dataset_;
}

ApiResponse KpiService::Summary() const {
  const auto data = dataset();
  if (!data) return NoDataset();
  std::size_t clean_rows = 0;
  try {
    clean_rows = DropMissing(*data).row_count();
  } catch (const Error& e) {
    return FromError(e);
  }

  const auto missing = data->missing_counts();
  json columns = json::array();
  json missing_by_name = json::object();
  for (std::size_t c = 0; c < data->column_count(); ++c) {
    const ColumnSchema& col = data->schema()[c];
    std::vector<double> values;
    for (const Row& row : data->rows()) {
      if (c < row.size() && row[c]) values.push_back(*row[c]);
    }
    json stats = {{"name", col.name},
                  {"role", ColumnRoleName(col.role)},
                  {"unit", col.unit ? json(*col.unit) : json(nullptr)},
                  {"non_null", values.size()},
                  {"missing", missing[c]}};
    if (!values.empty()) {
      double sum = 0.0;
      for (double v : values) sum += v;
      const double mean = sum / static_cast<double>(values.size());
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      stats["mean"] = mean;
      stats["std"] = std::sqrt(ss / static_cast<double>(values.size()));
      stats["min"] = *std::min_element(values.begin(), values.end());
      stats["max"] = *std::max_element(values.begin(), values.end());
    } else {
      stats["mean"] = stats["std"] = stats["min"] = stats["max"] = nullptr;
    }
    missing_by_name[col.name] = missing[c];
    columns.push_back(std::move(stats));
  }
  return {200,
          {{"rows", data->row_count()},
           {"column_count", data->column_count()},
           {"clean_rows", clean_rows},
           {"missing", std::move(missing_by_name)},
           {"columns", std::move(columns)}}};
}

ApiResponse KpiService::PutDataset(const std::string& body) {
  try {
    Dataset data = DatasetFromJson(json::parse(body));
    const auto violations = ValidateDataset(data);
    if (!violations.empty()) {
      json list = json::array();
      for (const Violation& v : violations) {
        list.push_back({{"row", v.row ? json(*v.row) : json(nullptr)},
                        {"column", v.column ? json(*v.column) : json(nullptr)},
                        {"rule", v.rule}});
      }
      ApiResponse r = ErrorResponse(422, "InvalidDataset",
                                    "dataset violates its invariants");
      r.body["error"]["violations"] = std::move(list);
      return r;
    }
    const std::size_t rows = data.row_count();
    SetDataset(std::move(data));
    return {200, {{"rows", rows}}};
  } catch (const json::exception& e) {
    return ErrorResponse(400, "MalformedInput", e.what());
  } catch (const Error& e) {
    return FromError(e);
  }
}

ApiResponse KpiService::SubmitTrain(const std::string& body) {
  const auto data = dataset();
  if (!data) return NoDataset();

  ModelKind kind;
  std::uint64_t seed = config_.default_seed;
  double test_fraction = config_.default_test_fraction;
  TrainConfig train_config;
  try {
    const json request = body.empty() ? json::object() : json::parse(body);
    if (!request.is_object() || !request.contains("model_kind") ||
        !request.at("model_kind").is_string()) {
      return ErrorResponse(400, "InvalidArgument", "'model_kind' is required");
    }
    kind = ParseModelKind(request.at("model_kind").get<std::string>());
    if (request.contains("seed")) {
      const json& s = request.at("seed");
      if (s.is_number_unsigned()) {
        seed = s.get<std::uint64_t>();
      } else if (s.is_number_integer() && s.get<std::int64_t>() >= 0) {
        seed = static_cast<std::uint64_t>(s.get<std::int64_t>());
      } else {
        return ErrorResponse(400, "InvalidArgument",
                             "'seed' must be a non-negative integer");
      }
    }
    if (request.contains("test_fraction")) {
      const json& f = request.at("test_fraction");
      if (!f.is_number()) {
        return ErrorResponse(400, "BadFraction", "'test_fraction' must be a number");
      }
      test_fraction = f.get<double>();
      if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        return ErrorResponse(400, "BadFraction", "'test_fraction' must be in (0,1)");
      }
    }
    if (request.contains("hyperparameters")) {
      train_config = WithHyperparameters(train_config, kind,
                                         request.at("hyperparameters"));
    }
    train_config.Validate();
  } catch (const json::exception& e) {
    return ErrorResponse(400, "MalformedInput", e.what());
  } catch (const Error& e) {
    return ErrorResponse(400, ErrorCodeName(e.code()), e.what());
  }

  JobRecord job;
  job.id = "job-" + std::to_string(next_job_.fetch_add(1));
  job.kind = JobKind::kTrain;
  {
    std::lock_guard lock(jobs_mutex_);
    jobs_[job.id] = job;
    workers_.emplace_back([this, id = job.id, data, kind, seed, test_fraction,
                           train_config] {
      RunTrainJob(id, data, kind, seed, test_fraction, train_config);
    });
  }
  return {202, JobToJson(job)};
}

void KpiService::Transition(const std::string& job_id, JobStatus next,
                            const std::string& result,
                            const std::string& error) {
  std::lock_guard lock(jobs_mutex_);
  JobRecord& job = jobs_.at(job_id);
  // Status only moves forward: queued -> running -> done | failed.
  if (static_cast<int>(next) <= static_cast<int>(job.status)) return;
  job.status = next;
  job.result = result;
  job.error = error;
}

std::shared_ptr<std::mutex> KpiService::ModelLock(const std::string& model_id) {
  std::lock_guard lock(jobs_mutex_);
  auto& slot = model_locks_[model_id];
  if (!slot) slot = std::make_shared<std::mutex>();
  return slot;
}

void KpiService::RunTrainJob(const std::string& job_id,
                             std::shared_ptr<const Dataset> data,
                             ModelKind kind, std::uint64_t seed,
                             double test_fraction, TrainConfig config) {
  Transition(job_id, JobStatus::kRunning, "", "");
  try {
    const std::string hash = DatasetHash(*data);
    const std::string model_id =
        MakeModelId(kind, seed, test_fraction, hash, config);
    const auto guard = ModelLock(model_id);
    std::lock_guard serialize(*guard);

    const PreparedData prepared = PrepareData(*data, test_fraction, seed);
    TrainingRun run = TrainAndEvaluate(prepared, kind, config, hash);
    store_.Save(run);
    auto shared = std::make_shared<const TrainingRun>(std::move(run));
    {
      std::unique_lock lock(models_mutex_);
      models_[model_id] = std::move(shared);
    }
    Transition(job_id, JobStatus::kDone, model_id, "");
  } catch (const std::exception& e) {
    Transition(job_id, JobStatus::kFailed, "", e.what());
  }
}

ApiResponse KpiService::GetJob(const std::string& id) const {
  std::lock_guard lock(jobs_mutex_);
  const auto it = jobs_.find(id);
  if (it == jobs_.end()) {
    return ErrorResponse(404, "NotFound", "unknown job '" + id + "'");
  }
  return {200, JobToJson(it->second)};
}

std::shared_ptr<const TrainingRun> KpiService::FindModel(
    const std::string& id) const {
  std::shared_lock lock(models_mutex_);
  const auto it = models_.find(id);
  return it == models_.end() ? nullptr : it->second;
}

ApiResponse KpiService::ListModels() const {
  json list = json::array();
  std::shared_lock lock(models_mutex_);
  for (const auto& [id, run] : models_) list.push_back(ModelListing(*run));
  return {200, {{"models", std::move(list)}}};
}

ApiResponse KpiService::GetModel(const std::string& id) const {
  const auto run = FindModel(id);
  if (!run) return ErrorResponse(404, "NotFound", "unknown model '" + id + "'");
  json body = TrainedModelToJson(run->model);
  body["id"] = run->id;
  body["split"] = {{"seed", run->split.seed},
                   {"test_fraction", run->split.test_fraction},
                   {"train_size", run->split.train_indices.size()},
                   {"test_size", run->split.test_indices.size()}};
  return {200, std::move(body)};
}

ApiResponse KpiService::ModelMetrics(
    const std::string& id, const std::optional<std::string>& threshold) const {
  const auto run = FindModel(id);
  if (!run) return ErrorResponse(404, "NotFound", "unknown model '" + id + "'");
  double t = run->model.training_config.threshold;
  if (threshold) {
    const auto parsed = ParseReal(*threshold);
    if (!parsed || *parsed < 0.0 || *parsed > 1.0) {
      return ErrorResponse(400, "InvalidArgument",
                           "threshold must be a number in [0,1]");
    }
    t = *parsed;
  }
  try {
    const Evaluation e = Evaluate(run->test_labels, run->test_scores, t);
    json body = EvaluationToJson(e);
    body["model_id"] = run->id;
    body["kind"] = ModelKindName(run->model.kind);
    return {200, std::move(body)};
  } catch (const Error& e) {
    return FromError(e);
  }
}

ApiResponse KpiService::Analytics() const {
  const auto data = dataset();
  if (!data) return NoDataset();
  try {
    return {200, AnalysisReport(*data)};
  } catch (const Error& e) {
    return FromError(e);
  }
}

ApiResponse KpiService::Forecast(
    const std::map<std::string, std::string>& params) const {
  const auto data = dataset();
  if (!data) return NoDataset();

  auto get = [&](const std::string& key) -> std::optional<std::string> {
    const auto it = params.find(key);
    if (it == params.end()) return std::nullopt;
    return it->second;
  };
  const auto column = get("column");
  if (!column) return ErrorResponse(400, "InvalidArgument", "'column' is required");
  const auto index = data->column_index(*column);
  if (!index) {
    return ErrorResponse(404, "NotFound", "unknown column '" + *column + "'");
  }

  long long horizon = 1;
  if (const auto h = get("horizon")) {
    const auto parsed = ParseInteger(*h);
    if (!parsed || *parsed < 1 || *parsed > 10000) {
      return ErrorResponse(400, "InvalidArgument",
                           "'horizon' must be an integer >= 1");
    }
    horizon = *parsed;
  }
  double confidence = 0.95;
  double alpha = 0.5;
  double beta = 0.3;
  for (auto [key, target] : {std::pair{"confidence", &confidence},
                             std::pair{"alpha", &alpha},
                             std::pair{"beta", &beta}}) {
    if (const auto text = get(key)) {
      const auto parsed = ParseReal(*text);
      if (!parsed) {
        return ErrorResponse(400, "InvalidArgument",
                             std::string("'") + key + "' must be a number");
      }
      *target = *parsed;
    }
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    return ErrorResponse(400, "InvalidArgument", "'confidence' must be in (0,1)");
  }

  std::vector<double> series;
  json history = json::array();
  for (std::size_t r = 0; r < data->row_count(); ++r) {
    const Cell& cell = data->rows()[r][*index];
    if (!cell) continue;
    history.push_back({{"t", r}, {"value", *cell}});
    series.push_back(*cell);
  }
  try {
    const ForecastResult f = HoltForecast(
        series, static_cast<std::size_t>(horizon), alpha, beta, confidence);
    json body = ForecastToJson(f);
    body["column"] = *column;
    body["history"] = std::move(history);
    return {200, std::move(body)};
  } catch (const Error& e) {
    return FromError(e);
  }
}

ApiResponse KpiService::ModelComparison() const {
  std::vector<std::shared_ptr<const TrainingRun>> runs;
  {
    std::shared_lock lock(models_mutex_);
    for (const auto& [id, run] : models_) runs.push_back(run);
  }
  std::stable_sort(runs.begin(), runs.end(), [](const auto& a, const auto& b) {
    return a->evaluation.report.accuracy > b->evaluation.report.accuracy;
  });
  json rows = json::array();
  json best = json::array();
  for (const auto& run : runs) {
    rows.push_back(ModelListing(*run));
    if (run->evaluation.report.accuracy == runs.front()->evaluation.report.accuracy) {
      best.push_back(run->id);
    }
  }
  return {200, {{"models", std::move(rows)}, {"best", std::move(best)}}};
}

void KpiService::WaitForJobs() {
  for (;;) {
    std::vector<std::jthread> pending;
    {
      std::lock_guard lock(jobs_mutex_);
      pending.swap(workers_);
    }
    if (pending.empty()) return;
    for (auto& t : pending) t.join();
  }
}

void KpiService::Mount(httplib::Server& server) {
  server.set_default_headers(
      {{"Access-Control-Allow-Origin", config_.cors_origin},
       {"Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS"},
       {"Access-Control-Allow-Headers", "Content-Type"}});

  server.Options(R"(/api/.*)", [](const httplib::Request&,
                                  httplib::Response& res) { res.status = 204; });
  server.Get("/api/summary", [this](const httplib::Request&,
                                    httplib::Response& res) {
    Reply(res, Summary());
  });
  server.Put("/api/dataset", [this](const httplib::Request& req,
                                    httplib::Response& res) {
    Reply(res, PutDataset(req.body));
  });
  server.Post("/api/train", [this](const httplib::Request& req,
                                   httplib::Response& res) {
    Reply(res, SubmitTrain(req.body));
  });
  server.Get(R"(/api/jobs/([A-Za-z0-9_\-]+))",
             [this](const httplib::Request& req, httplib::Response& res) {
               Reply(res, GetJob(req.matches[1]));
             });
  server.Get("/api/models", [this](const httplib::Request&,
                                   httplib::Response& res) {
    Reply(res, ListModels());
  });
  server.Get("/api/comparison", [this](const httplib::Request&,
                                       httplib::Response& res) {
    Reply(res, ModelComparison());
  });
  server.Get(R"(/api/models/([A-Za-z0-9_\-]+)/metrics)",
             [this](const httplib::Request& req, httplib::Response& res) {
               std::optional<std::string> threshold;
               if (req.has_param("threshold")) {
                 threshold = req.get_param_value("threshold");
               }
               Reply(res, ModelMetrics(req.matches[1], threshold));
             });
  server.Get(R"(/api/models/([A-Za-z0-9_\-]+))",
             [this](const httplib::Request& req, httplib::Response& res) {
               Reply(res, GetModel(req.matches[1]));
             });
  server.Get("/api/analytics", [this](const httplib::Request&,
                                      httplib::Response& res) {
    Reply(res, Analytics());
  });
  server.Get("/api/forecast", [this](const httplib::Request& req,
                                     httplib::Response& res) {
    std::map<std::string, std::string> params;
    for (const auto& [key, value] : req.params) params[key] = value;
    Reply(res, Forecast(params));
  });
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    if (res.status == 404) {
      Reply(res, ErrorResponse(404, "NotFound", "no such endpoint"));
    } else {
      Reply(res, ErrorResponse(res.status, "BadRequest", "request rejected"));
    }
  });
  server.set_exception_handler([](const httplib::Request&,
                                  httplib::Response& res, std::exception_ptr ep) {
    std::string message = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      message = e.what();
    } catch (...) {
    }
    Reply(res, ErrorResponse(500, "Internal", message));
  });
}

}  // namespace citykpi
