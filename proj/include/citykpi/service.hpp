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

// HTTP/JSON API over the analytics engine. Handlers are plain member
// functions returning ApiResponse so they can be exercised without a socket;
// Mount() wires them onto a cpp-httplib server.

#ifndef CITYKPI_SERVICE_HPP_
#define CITYKPI_SERVICE_HPP_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

#include "citykpi/dataset.hpp"
#include "citykpi/error.hpp"
#include "citykpi/pipeline.hpp"
#include "json.hpp"

namespace httplib {
class Server;
}

namespace citykpi {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string dataset_path;  // optional; loaded at startup when set
  std::string models_dir = "models";
  std::uint64_t default_seed = 0;
  double default_test_fraction = 0.3;
  std::string cors_origin = "*";

  // Throws kInvalidArgument on a bad port, fraction or unwritable directory.
  void Validate() const;
};

// Parses "host:port" (or just "port") into the config, as read from
// CITYKPI_ADDR.
void ApplyListenAddress(ServiceConfig& config, const std::string& address);

enum class JobKind { kTrain, kEvaluate, kForecast };
enum class JobStatus { kQueued, kRunning, kDone, kFailed };

std::string_view JobKindName(JobKind kind);
std::string_view JobStatusName(JobStatus status);

struct JobRecord {
  std::string id;
  JobKind kind = JobKind::kTrain;
  JobStatus status = JobStatus::kQueued;
  std::string result;  // model id once done
  std::string error;   // failure message
};

nlohmann::json JobToJson(const JobRecord& job);

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

// HTTP status for a library error code.
int HttpStatusFor(ErrorCode code);
ApiResponse ErrorResponse(int status, std::string_view code,
                          const std::string& message);

// Flat-file model registry: one <id>.json per model.
class ModelStore {
 public:
  explicit ModelStore(std::filesystem::path dir);

  void Save(const TrainingRun& run) const;
  std::optional<TrainingRun> Load(const std::string& id) const;
  std::vector<std::string> List() const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path PathFor(const std::string& id) const;
  std::filesystem::path dir_;
};

class KpiService {
 public:
  explicit KpiService(ServiceConfig config);
  ~KpiService();

  KpiService(const KpiService&) = delete;
  KpiService& operator=(const KpiService&) = delete;

  // Replaces the active dataset (copy-on-write).
  void SetDataset(Dataset dataset);
  std::shared_ptr<const Dataset> dataset() const;

  ApiResponse Summary() const;
  ApiResponse PutDataset(const std::string& body);
  ApiResponse SubmitTrain(const std::string& body);
  ApiResponse GetJob(const std::string& id) const;
  ApiResponse ListModels() const;
  ApiResponse GetModel(const std::string& id) const;
  ApiResponse ModelMetrics(const std::string& id,
                           const std::optional<std::string>& threshold) const;
  ApiResponse Analytics() const;
  ApiResponse Forecast(const std::map<std::string, std::string>& params) const;
  ApiResponse ModelComparison() const;

  // Blocks until every submitted job has finished.
  void WaitForJobs();

  void Mount(httplib::Server& server);

  const ServiceConfig& config() const { return config_; }

 private:
  std::shared_ptr<const TrainingRun> FindModel(const std::string& id) const;
  void RunTrainJob(const std::string& job_id, std::shared_ptr<const Dataset> data,
                   ModelKind kind, std::uint64_t seed, double test_fraction,
                   TrainConfig config);
  void Transition(const std::string& job_id, JobStatus next,
                  const std::string& result, const std::string& error);
  std::shared_ptr<std::mutex> ModelLock(const std::string& model_id);

  ServiceConfig config_;
  ModelStore store_;

  mutable std::shared_mutex dataset_mutex_;
  std::shared_ptr<const Dataset> dataset_;

  mutable std::shared_mutex models_mutex_;
  std::map<std::string, std::shared_ptr<const TrainingRun>> models_;

  mutable std::mutex jobs_mutex_;
  std::map<std::string, JobRecord> jobs_;
  std::map<std::string, std::shared_ptr<std::mutex>> model_locks_;
  std::vector<std::jthread> workers_;
  std::atomic<std::uint64_t> next_job_{1};
};

}  // namespace citykpi

#endif  // CITYKPI_SERVICE_HPP_
