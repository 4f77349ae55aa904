#include "scenvar/service.hpp"

#include "scenvar/catalog.hpp"
#include "scenvar/error.hpp"
#include "scenvar/job_queue.hpp"
#include "scenvar/json_io.hpp"
#include "scenvar/validation.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <shared_mutex>
#include <sstream>

namespace scenvar::service {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view to_string(JobState s) noexcept {
  switch (s) {
    case JobState::queued: return "queued";
    case JobState::running: return "running";
    case JobState::done: return "done";
    case JobState::failed: return "failed";
  }
  return "failed";
}

std::optional<JobState> parse_job_state(std::string_view s) noexcept {
  for (auto st : {JobState::queued, JobState::running, JobState::done, JobState::failed})
    if (to_string(st) == s) return st;
  return std::nullopt;
}

bool is_valid_id(std::string_view id) noexcept {
  if (id.empty() || id.size() > 128 || id.front() == '.') return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
           c == '_' || c == '-';
  });
}

namespace {

Response json_response(int status, const json& body) { return {status, "application/json", body.dump(2) + "\n"}; }

Response error_response(int status, std::string_view code, std::string_view message,
                        const std::vector<Finding>* findings = nullptr) {
  json body{{"code", code}, {"message", message}};
  if (findings) body["findings"] = *findings;
  return json_response(status, body);
}

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  while (!path.empty()) {
    if (path.front() == '/') {
      path.remove_prefix(1);
      continue;
    }
    const auto slash = path.find('/');
    parts.push_back(path.substr(0, slash));
    if (slash == std::string_view::npos) break;
    path.remove_prefix(slash);
  }
  return parts;
}

std::optional<std::string> query_value(const QueryParams& query, std::string_view name) {
  const auto it = query.find(name);
  if (it == query.end()) return std::nullopt;
  return it->second;
}

void write_atomically(const fs::path& target, std::string_view content) {
  fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json job_to_json(const EvaluationJob& job) {
  json j{{"job_id", job.job_id}, {"scenario_id", job.scenario_id}, {"state", to_string(job.state)}};
  if (job.report_json) j["report"] = json::parse(*job.report_json);
  if (job.error) j["error"] = *job.error;
  return j;
}

struct EvaluateRequest {
  mc::SimulationConfig config;
  PipelineOptions options;
};

// Strict parse of the optional evaluate body; every problem becomes a finding.
std::vector<Finding> parse_overrides(std::string_view body, EvaluateRequest& out) {
  std::vector<Finding> findings;
  auto bad = [&](std::string path, std::string message) {
    findings.push_back({Severity::error, "invalid-value", std::move(message), std::move(path)});
  };
  if (body.find_first_not_of(" \t\r\n") == std::string_view::npos) return findings;
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    findings.push_back({Severity::error, "syntax-error", e.what(), "$"});
    return findings;
  }
  if (!doc.is_object()) {
    findings.push_back({Severity::error, "invalid-type", "expected an object", "$"});
    return findings;
  }
  for (const auto& [name, v] : doc.items()) {
    if (name == "n_sims") {
      if (v.is_number_unsigned() && v.get<std::uint64_t>() >= 1 && v.get<std::uint64_t>() <= 10'000'000)
        out.config.n_sims = v.get<std::size_t>();
      else
        bad(name, "n_sims must be an integer in [1, 10000000]");
    } else if (name == "seed") {
      if (v.is_number_unsigned())
        out.config.seed = v.get<std::uint64_t>();
      else
        bad(name, "seed must be a non-negative 64-bit integer");
    } else if (name == "ci_level") {
      if (v.is_number() && v.get<double>() > 0.0 && v.get<double>() < 1.0)
        out.config.ci_level = v.get<double>();
      else
        bad(name, "ci_level must lie in (0, 1)");
    } else if (name == "default_uncertainty_std_pct") {
      if (v.is_number() && v.get<double>() >= 0.0)
        out.config.default_uncertainty_std_pct = v.get<double>();
      else
        bad(name, "default_uncertainty_std_pct must be a number >= 0");
    } else if (name == "include_residual_noise") {
      if (v.is_boolean())
        out.config.include_residual_noise = v.get<bool>();
      else
        bad(name, "include_residual_noise must be a boolean");
    } else if (name == "criterion") {
      const auto c = v.is_string() ? var::parse_criterion(v.get<std::string>()) : std::nullopt;
      if (c)
        out.options.criterion = *c;
      else
        bad(name, "criterion must be 'aic' or 'bic'");
    } else if (name == "max_lag") {
      if (v.is_number_unsigned() && v.get<std::uint64_t>() >= 1 && v.get<std::uint64_t>() <= 64)
        out.options.max_lag = v.get<int>();
      else
        bad(name, "max_lag must be an integer in [1, 64]");
    } else if (name == "conditioning") {
      if (v == "path_substitution")
        out.options.conditioning = Conditioning::path_substitution;
      else if (v == "exogenous")
        out.options.conditioning = Conditioning::exogenous;
      else
        bad(name, "conditioning must be 'path_substitution' or 'exogenous'");
    } else {
      findings.push_back({Severity::error, "unknown-field", "unknown field", name});
    }
  }
  return findings;
}

}  // namespace

struct Service::Impl {
  struct StoredScenario {
    std::string raw;
    Scenario scenario;
  };

  explicit Impl(ServiceConfig cfg) : config(std::move(cfg)) {
    fs::create_directories(config.data_dir);
    catalog.load(catalog_dir());
    load_scenarios();
    load_jobs();
    queue = std::make_unique<JobQueue>(std::max(1u, config.job_workers), config.max_queued_jobs);
  }

  fs::path catalog_dir() const { return config.data_dir / "catalog"; }
  fs::path scenario_file(const std::string& id) const { return config.data_dir / "scenarios" / (id + ".json"); }
  fs::path job_file(const std::string& id) const { return config.data_dir / "jobs" / (id + ".json"); }

  void load_scenarios() {
    const auto dir = config.data_dir / "scenarios";
    if (!fs::is_directory(dir)) return;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.path().extension() != ".json") continue;
      std::string raw = read_file(entry.path());
      try {
        Scenario s = parse_scenario(raw, catalog.synonyms());
        if (!is_valid_id(s.id) || entry.path().stem() != s.id) continue;
        std::string id = s.id;
        scenarios.emplace(std::move(id), StoredScenario{std::move(raw), std::move(s)});
      } catch (const std::exception&) {
        // unreadable documents are skipped
      }
    }
  }

  void load_jobs() {
    const auto dir = config.data_dir / "jobs";
    if (!fs::is_directory(dir)) return;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.path().extension() != ".json") continue;
      try {
        const json j = json::parse(read_file(entry.path()));
        EvaluationJob job;
        job.job_id = j.at("job_id").get<std::string>();
        job.scenario_id = j.at("scenario_id").get<std::string>();
        job.state = parse_job_state(j.at("state").get<std::string>()).value_or(JobState::failed);
        if (j.contains("report")) job.report_json = j.at("report").dump(2) + "\n";
        if (j.contains("error")) job.error = j.at("error").get<std::string>();
        if (job.state == JobState::queued || job.state == JobState::running) {
          job.state = JobState::failed;
          job.report_json.reset();
          job.error = "interrupted: service stopped before the job finished";
          persist_job(job);
        }
        if (job.job_id.starts_with("job-")) {
          try {
            next_job = std::max<std::uint64_t>(next_job, std::stoull(job.job_id.substr(4)) + 1);
          } catch (const std::exception&) {
          }
        }
        jobs.emplace(job.job_id, std::move(job));
      } catch (const std::exception&) {
      }
    }
  }

  void persist_job(const EvaluationJob& job) const { write_atomically(job_file(job.job_id), job_to_json(job).dump(2) + "\n"); }

  void set_job(const std::string& id, JobState state, std::optional<std::string> report,
               std::optional<std::string> error) {
    EvaluationJob copy;
    {
      std::scoped_lock lock(state_mutex);
      auto& job = jobs.at(id);
      job.state = state;
      job.report_json = std::move(report);
      job.error = std::move(error);
      copy = job;
    }
    try {
      persist_job(copy);
    } catch (const std::exception&) {
    }
    jobs_changed.notify_all();
  }

  Response health() {
    std::size_t n_scenarios = 0, n_jobs = 0;
    {
      std::scoped_lock lock(state_mutex);
      n_scenarios = scenarios.size();
      n_jobs = jobs.size();
    }
    std::shared_lock lock(catalog_mutex);
    return json_response(200, {{"status", "ok"},
                               {"version", SCENVAR_VERSION},
                               {"series", catalog.size()},
                               {"scenarios", n_scenarios},
                               {"jobs", n_jobs},
                               {"queued", queue->pending()}});
  }

  Response post_dataset(std::string_view body) {
    std::unique_lock lock(catalog_mutex);
    std::istringstream in{std::string(body)};
    IngestSummary summary;
    try {
      summary = catalog.ingest_csv(in);
    } catch (const FormatError& e) {
      return error_response(400, e.code(), e.what());
    }
    CleaningReport cleaning;
    try {
      cleaning = catalog.clean_all(config.cleaning);
    } catch (const Error& e) {
      return error_response(422, e.code(), e.what());
    }
    catalog.save(catalog_dir());
    return json_response(200, {{"ingest", summary}, {"cleaning", cleaning}, {"series", catalog.size()}});
  }

  Response get_series(const QueryParams& query) {
    KeyFilter filter;
    try {
      if (auto v = query_value(query, "metric")) filter.metric = normalize_label(*v, LabelKind::metric, catalog.synonyms());
      if (auto v = query_value(query, "item")) filter.item = normalize_label(*v, LabelKind::item, catalog.synonyms());
      if (auto v = query_value(query, "region")) filter.region = normalize_label(*v, LabelKind::region, catalog.synonyms());
      if (auto v = query_value(query, "secondary_region"))
        filter.secondary_region = normalize_label(*v, LabelKind::region, catalog.synonyms());
    } catch (const LabelError& e) {
      return error_response(400, e.code(), e.what());
    }
    if (auto v = query_value(query, "frequency")) {
      filter.frequency = parse_frequency(*v);
      if (!filter.frequency) return error_response(400, "unknown-frequency", "unknown frequency: " + *v);
    }
    std::shared_lock lock(catalog_mutex);
    json list = json::array();
    for (const auto& key : catalog.query(filter)) {
      const auto series = catalog.find(key);
      json entry{{"key", key}, {"label", display_label(key)}, {"id", to_string(key)}};
      if (series) {
        entry["points"] = series->points.size();
        entry["unit"] = series->unit;
        entry["source"] = series->source;
        entry["log_scale"] = series->log_scale;
        if (!series->points.empty()) {
          entry["first"] = format_date(series->points.front().date);
          entry["last"] = format_date(series->points.back().date);
        }
      }
      list.push_back(std::move(entry));
    }
    return json_response(200, {{"series", list}});
  }

  Response post_scenario(std::string_view body) {
    Scenario scenario;
    try {
      scenario = parse_scenario(body, catalog.synonyms());
    } catch (const ScenarioParseError& e) {
      return error_response(400, "invalid-scenario", e.what(), &e.findings());
    }
    if (!is_valid_id(scenario.id))
      return error_response(400, "invalid-id", "scenario id must be 1-128 characters of [A-Za-z0-9._-]");
    std::scoped_lock lock(state_mutex);
    if (scenarios.contains(scenario.id))
      return error_response(409, "scenario-exists", "scenario already exists: " + scenario.id);
    write_atomically(scenario_file(scenario.id), body);
    const std::string id = scenario.id;
    scenarios.emplace(id, StoredScenario{std::string(body), std::move(scenario)});
    return json_response(201, {{"id", id}});
  }

  Response list_scenarios() {
    std::scoped_lock lock(state_mutex);
    json list = json::array();
    for (const auto& [id, s] : scenarios)
      list.push_back({{"id", id},
                      {"name", s.scenario.name},
                      {"assumptions", s.scenario.assumptions.size()},
                      {"impacts", s.scenario.impacts.size()}});
    return json_response(200, {{"scenarios", list}});
  }

  std::optional<StoredScenario> find_scenario(const std::string& id) {
    std::scoped_lock lock(state_mutex);
    const auto it = scenarios.find(id);
    if (it == scenarios.end()) return std::nullopt;
    return it->second;
  }

  Response get_scenario(const std::string& id) {
    auto s = find_scenario(id);
    if (!s) return error_response(404, "not-found", "no scenario " + id);
    return {200, "application/json", s->raw};
  }

  Response validate_scenario(const std::string& id) {
    auto s = find_scenario(id);
    if (!s) return error_response(404, "not-found", "no scenario " + id);
    std::shared_lock lock(catalog_mutex);
    return json_response(200, validate(s->scenario, catalog));
  }

  Response evaluate_scenario(const std::string& id, std::string_view body) {
    auto s = find_scenario(id);
    if (!s) return error_response(404, "not-found", "no scenario " + id);
    EvaluateRequest request;
    request.config.workers = config.simulation_workers;
    const auto problems = parse_overrides(body, request);
    if (!problems.empty()) return error_response(400, "invalid-config", "invalid evaluation overrides", &problems);

    std::shared_ptr<const Catalog> snapshot;
    {
      std::shared_lock lock(catalog_mutex);
      ValidationOptions vopts;
      vopts.max_lag = request.options.max_lag;
      const auto report = validate(s->scenario, catalog, vopts);
      if (!report.valid())
        return error_response(422, "invalid-scenario", "scenario does not validate against the catalog",
                              &report.findings);
      snapshot = std::make_shared<const Catalog>(catalog);
    }

    EvaluationJob job;
    {
      std::scoped_lock lock(state_mutex);
      char buf[32];
      std::snprintf(buf, sizeof buf, "job-%06llu", static_cast<unsigned long long>(next_job++));
      job.job_id = buf;
      job.scenario_id = id;
      jobs.emplace(job.job_id, job);
    }
    persist_job(job);

    auto task = [this, job_id = job.job_id, scenario = s->scenario, snapshot, request] {
      set_job(job_id, JobState::running, std::nullopt, std::nullopt);
      try {
        const auto report = evaluate(scenario, *snapshot, request.config, request.options);
        set_job(job_id, JobState::done, render_report(report, ReportFormat::json), std::nullopt);
      } catch (const PipelineError& e) {
        set_job(job_id, JobState::failed, std::nullopt, "[" + e.stage() + "] " + e.code() + ": " + e.what());
      } catch (const std::exception& e) {
        set_job(job_id, JobState::failed, std::nullopt, e.what());
      }
    };
    if (!queue->submit(std::move(task))) {
      set_job(job.job_id, JobState::failed, std::nullopt, "job queue is full");
      return error_response(503, "queue-full", "too many pending evaluations; retry later");
    }
    return json_response(202, {{"job_id", job.job_id}, {"state", "queued"}});
  }

  std::optional<EvaluationJob> find_job(const std::string& id) {
    std::scoped_lock lock(state_mutex);
    const auto it = jobs.find(id);
    if (it == jobs.end()) return std::nullopt;
    return it->second;
  }

  Response get_job(const std::string& id) {
    auto job = find_job(id);
    if (!job) return error_response(404, "not-found", "no job " + id);
    return json_response(200, job_to_json(*job));
  }

  Response get_report(const std::string& id, const QueryParams& query) {
    auto job = find_job(id);
    if (!job) return error_response(404, "not-found", "no job " + id);
    const auto format = parse_report_format(query_value(query, "format").value_or("json"));
    if (!format) return error_response(400, "invalid-format", "format must be 'json' or 'table'");
    if (job->state != JobState::done)
      return error_response(409, "job-not-done",
                            "job is " + std::string(to_string(job->state)) +
                                (job->error ? ": " + *job->error : std::string()));
    if (*format == ReportFormat::json) return {200, "application/json", *job->report_json};
    const auto report = report_from_json(json::parse(*job->report_json));
    return {200, "text/plain; charset=utf-8", render_report(report, ReportFormat::table)};
  }

  Response dispatch(std::string_view method, std::string_view path, const QueryParams& query,
                    std::string_view body) {
    const auto parts = split_path(path);
    const bool get = method == "GET";
    const bool post = method == "POST";
    auto not_allowed = [] { return error_response(405, "method-not-allowed", "method not allowed"); };
    const auto n = parts.size();

    if (n == 1 && parts[0] == "health") return get ? health() : not_allowed();
    if (n == 1 && parts[0] == "datasets") return post ? post_dataset(body) : not_allowed();
    if (n == 1 && parts[0] == "series") return get ? get_series(query) : not_allowed();
    if (n == 1 && parts[0] == "scenarios") {
      if (post) return post_scenario(body);
      return get ? list_scenarios() : not_allowed();
    }
    if (n >= 2 && parts[0] == "scenarios") {
      const std::string id(parts[1]);
      if (n == 2) return get ? get_scenario(id) : not_allowed();
      if (n == 3 && parts[2] == "validate") return post ? validate_scenario(id) : not_allowed();
      if (n == 3 && parts[2] == "evaluate") return post ? evaluate_scenario(id, body) : not_allowed();
    }
    if (n >= 2 && parts[0] == "jobs") {
      const std::string id(parts[1]);
      if (n == 2) return get ? get_job(id) : not_allowed();
      if (n == 3 && parts[2] == "report") return get ? get_report(id, query) : not_allowed();
    }
    return error_response(404, "not-found", "no route for " + std::string(path));
  }

  ServiceConfig config;
  std::shared_mutex catalog_mutex;
  Catalog catalog;
  std::mutex state_mutex;
  std::condition_variable jobs_changed;
  std::map<std::string, StoredScenario> scenarios;
  std::map<std::string, EvaluationJob> jobs;
  std::uint64_t next_job = 1;
  std::unique_ptr<JobQueue> queue;
  httplib::Server server;
  std::atomic<bool> routes_installed{false};
  std::atomic<bool> stopped{false};

  void install_routes(Service& owner) {
    if (routes_installed.exchange(true)) return;
    auto forward = [&owner](const httplib::Request& req, httplib::Response& res) {
      QueryParams query;
      for (const auto& [k, v] : req.params) query.emplace(k, v);
      const Response r = owner.handle(req.method, req.path, query, req.body);
      res.status = r.status;
      res.set_content(r.body, r.content_type);
    };
    server.Get(".*", forward);
    server.Post(".*", forward);
    server.Put(".*", forward);
    server.Delete(".*", forward);
    server.Patch(".*", forward);
  }
};

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

Service::~Service() { stop(); }

Response Service::handle(std::string_view method, std::string_view path, const QueryParams& query,
                         std::string_view body) {
  try {
    return impl_->dispatch(method, path, query, body);
  } catch (const Error& e) {
    return error_response(500, e.code(), e.what());
  } catch (const std::exception& e) {
    return error_response(500, "internal-error", e.what());
  }
}

bool Service::listen(const std::string& host, int port) {
  impl_->install_routes(*this);
  return impl_->server.listen(host, port);
}

int Service::bind(const std::string& host, int port) {
  impl_->install_routes(*this);
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool Service::listen_after_bind() { return impl_->server.listen_after_bind(); }

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

void Service::stop() {
  if (impl_->stopped.exchange(true)) return;
  impl_->server.stop();
  impl_->queue->shutdown();
  std::vector<std::string> orphaned;
  {
    std::scoped_lock lock(impl_->state_mutex);
    for (const auto& [id, job] : impl_->jobs)
      if (job.state == JobState::queued) orphaned.push_back(id);
  }
  for (const auto& id : orphaned)
    impl_->set_job(id, JobState::failed, std::nullopt, "interrupted: service stopped before the job started");
}

std::optional<EvaluationJob> Service::wait_for_job(const std::string& job_id, std::chrono::milliseconds timeout) {
  std::unique_lock lock(impl_->state_mutex);
  const auto finished = [&] {
    const auto it = impl_->jobs.find(job_id);
    return it == impl_->jobs.end() || it->second.state == JobState::done || it->second.state == JobState::failed;
  };
  impl_->jobs_changed.wait_for(lock, timeout, finished);
  const auto it = impl_->jobs.find(job_id);
  if (it == impl_->jobs.end()) return std::nullopt;
  return it->second;
}

}  // namespace scenvar::service
