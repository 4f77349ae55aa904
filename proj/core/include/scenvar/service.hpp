#pragma once

#include "scenvar/monte_carlo.hpp"
#include "scenvar/pipeline.hpp"
#include "scenvar/report.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace scenvar::service {

struct ServiceConfig {
  std::filesystem::path data_dir = "data";
  unsigned job_workers = 1;
  std::size_t max_queued_jobs = 64;
  /// Monte Carlo threads per evaluation (0 = hardware concurrency).
  unsigned simulation_workers = 0;
  CleaningPolicy cleaning;
};

enum class JobState { queued, running, done, failed };

std::string_view to_string(JobState s) noexcept;
std::optional<JobState> parse_job_state(std::string_view s) noexcept;

struct EvaluationJob {
  std::string job_id;
  std::string scenario_id;
  JobState state = JobState::queued;
  /// Canonical JSON rendering of the report; present iff state == done.
  std::optional<std::string> report_json;
  /// Present iff state == failed.
  std::optional<std::string> error;
};

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

using QueryParams = std::multimap<std::string, std::string, std::less<>>;

/// Catalog, scenario store and evaluation jobs behind a JSON HTTP interface.
///
/// Endpoints:
///   GET  /health
///   POST /datasets                      CSV body -> ingestion summary
///   GET  /series?metric=&item=&region=&frequency=
///   POST /scenarios                     scenario JSON -> {id}
///   GET  /scenarios, GET /scenarios/{id}
///   POST /scenarios/{id}/validate       -> ValidationReport
///   POST /scenarios/{id}/evaluate       optional config overrides -> {job_id}
///   GET  /jobs/{id}
///   GET  /jobs/{id}/report?format=json|table
///
/// Errors are {code, message, findings?}. State lives under data_dir
/// (catalog/, scenarios/<id>.json, jobs/<id>.json) and is reloaded on start;
/// jobs that were queued or running when the process stopped are marked failed.
class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Transport-independent request dispatch; the HTTP server forwards here.
  Response handle(std::string_view method, std::string_view path, const QueryParams& query,
                  std::string_view body);

  /// Binds and serves until stop(). Returns false if binding failed.
  bool listen(const std::string& host, int port);
  /// Binds without serving yet and returns the bound port, or -1 on failure.
  /// Port 0 picks an ephemeral port. Serve with listen_after_bind().
  int bind(const std::string& host, int port);
  bool listen_after_bind();
  /// Blocks until the server accepts connections.
  void wait_until_ready() const;
  /// Stops the HTTP server and the job workers. Jobs not yet started are
  /// marked failed.
  void stop();

  /// Polls until the job leaves queued/running or the timeout elapses.
  std::optional<EvaluationJob> wait_for_job(const std::string& job_id, std::chrono::milliseconds timeout);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// True for ids usable as file names: 1-128 chars of [A-Za-z0-9._-], not
/// starting with '.'.
bool is_valid_id(std::string_view id) noexcept;

}  // namespace scenvar::service
