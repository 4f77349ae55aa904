#include "scenvar/cli.hpp"

#include "scenvar/catalog.hpp"
#include "scenvar/error.hpp"
#include "scenvar/json_io.hpp"
#include "scenvar/pipeline.hpp"
#include "scenvar/report.hpp"
#include "scenvar/scenario.hpp"
#include "scenvar/service.hpp"
#include "scenvar/validation.hpp"

#include <CLI11.hpp>

#include <pthread.h>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace scenvar::cli {

namespace fs = std::filesystem;

namespace {

std::string default_data_dir() {
  if (const char* env = std::getenv("SCENVAR_DATA_DIR"); env && *env) return env;
  return "data";
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_findings(const std::vector<Finding>& findings, std::ostream& out) {
  for (const auto& f : findings) {
    out << (f.severity == Severity::error ? "error" : "warning") << " " << f.code;
    if (!f.path.empty()) out << " at " << f.path;
    out << ": " << f.message << '\n';
  }
}

struct Options {
  std::string data_dir = default_data_dir();

  std::vector<std::string> csv_files;
  std::string missing = "interpolate";
  double outlier_z = 4.0;
  std::string outlier_action = "winsorize";
  std::string transform = "none";

  std::optional<std::string> metric, item, region, frequency;

  std::string scenario_file;
  std::size_t sims = 5000;
  std::uint64_t seed = 0;
  double ci = 0.95;
  double default_std = 0.0;
  bool no_noise = false;
  unsigned workers = 0;
  std::string criterion = "aic";
  std::optional<int> max_lag;
  std::string conditioning = "path_substitution";
  std::string format = "table";
  std::optional<std::string> out_file;
  bool timing = false;

  std::string host = "127.0.0.1";
  int port = 8080;
  unsigned job_workers = 1;
};

CleaningPolicy cleaning_policy(const Options& o) {
  CleaningPolicy p;
  p.missing_strategy = o.missing == "drop" ? MissingStrategy::drop : MissingStrategy::linear_interpolate;
  p.outlier_z_threshold = o.outlier_z;
  p.outlier_action = o.outlier_action == "drop" ? OutlierAction::drop : OutlierAction::winsorize;
  p.transform = o.transform == "log" ? Transform::log : Transform::none;
  return p;
}

int cmd_ingest(const Options& o, std::ostream& out, std::ostream& err) {
  Catalog catalog;
  const fs::path dir = fs::path(o.data_dir) / "catalog";
  catalog.load(dir);
  for (const auto& file : o.csv_files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
      err << "error: cannot open " << file << '\n';
      return kExitFailure;
    }
    IngestSummary summary;
    try {
      summary = catalog.ingest_csv(in);
    } catch (const FormatError& e) {
      err << "error: " << file << ": " << e.what() << '\n';
      return kExitFailure;
    }
    out << file << ": " << summary.accepted << " rows accepted, " << summary.rejected << " rejected, "
        << summary.series_created << " new series\n";
    for (const auto& r : summary.rejections)
      out << "  line " << r.line << ": " << r.reason << ": " << r.message << '\n';
  }
  const CleaningReport report = catalog.clean_all(cleaning_policy(o));
  out << "cleaned " << catalog.size() << " series: " << report.duplicates_removed << " duplicates removed, "
      << report.missing_interpolated << " interpolated, " << report.missing_dropped << " missing dropped, "
      << report.outliers_winsorized << " winsorized, " << report.outliers_dropped << " outliers dropped\n";
  catalog.save(dir);
  return 0;
}

int cmd_series_list(const Options& o, std::ostream& out, std::ostream& err) {
  Catalog catalog;
  catalog.load(fs::path(o.data_dir) / "catalog");
  KeyFilter filter;
  if (o.metric) filter.metric = normalize_label(*o.metric, LabelKind::metric, catalog.synonyms());
  if (o.item) filter.item = normalize_label(*o.item, LabelKind::item, catalog.synonyms());
  if (o.region) filter.region = normalize_label(*o.region, LabelKind::region, catalog.synonyms());
  if (o.frequency) {
    filter.frequency = parse_frequency(*o.frequency);
    if (!filter.frequency) {
      err << "error: unknown frequency " << *o.frequency << '\n';
      return kExitUsage;
    }
  }
  out << "Series | Points | First | Last | Unit\n";
  for (const auto& key : catalog.query(filter)) {
    const auto s = catalog.find(key);
    out << to_string(key) << " | " << s->points.size() << " | "
        << (s->points.empty() ? "-" : format_date(s->points.front().date)) << " | "
        << (s->points.empty() ? "-" : format_date(s->points.back().date)) << " | " << s->unit << '\n';
  }
  return 0;
}

std::optional<Scenario> load_scenario(const std::string& file, const Catalog& catalog, std::ostream& err) {
  try {
    return parse_scenario(read_text(file), catalog.synonyms());
  } catch (const ScenarioParseError& e) {
    err << "error: " << file << ": " << e.what() << '\n';
    print_findings(e.findings(), err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return std::nullopt;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  Catalog catalog;
  catalog.load(fs::path(o.data_dir) / "catalog");
  const auto scenario = load_scenario(o.scenario_file, catalog, err);
  if (!scenario) return kExitFailure;
  ValidationOptions vopts;
  vopts.max_lag = o.max_lag;
  const ValidationReport report = validate(*scenario, catalog, vopts);
  print_findings(report.findings, out);
  if (report.valid()) {
    out << "valid\n";
    return 0;
  }
  out << "invalid (" << report.error_count() << " error(s))\n";
  return kExitFailure;
}

int cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
  Catalog catalog;
  catalog.load(fs::path(o.data_dir) / "catalog");
  const auto scenario = load_scenario(o.scenario_file, catalog, err);
  if (!scenario) return kExitFailure;

  mc::SimulationConfig config;
  config.n_sims = o.sims;
  config.seed = o.seed;
  config.ci_level = o.ci;
  config.default_uncertainty_std_pct = o.default_std;
  config.include_residual_noise = !o.no_noise;
  config.workers = o.workers;
  PipelineOptions options;
  options.criterion = *var::parse_criterion(o.criterion);
  options.max_lag = o.max_lag;
  options.conditioning = o.conditioning == "exogenous" ? Conditioning::exogenous : Conditioning::path_substitution;

  EvaluationReport report;
  try {
    report = evaluate(*scenario, catalog, config, options);
  } catch (const PipelineError& e) {
    err << "error [" << e.stage() << "] " << e.code() << ": " << e.what() << '\n';
    print_findings(e.findings(), err);
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  const auto format = *parse_report_format(o.format);
  const std::string text = render_report(report, format, {.include_timing = o.timing});
  if (o.out_file) {
    std::ofstream file(*o.out_file, std::ios::binary | std::ios::trunc);
    file << text;
    if (!file) {
      err << "error: cannot write " << *o.out_file << '\n';
      return kExitFailure;
    }
  } else {
    out << text;
  }
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  return 0;
}

int cmd_serve(const Options& o, std::ostream& out, std::ostream& err) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  sigset_t previous;
  pthread_sigmask(SIG_BLOCK, &signals, &previous);

  int status = 0;
  {
    service::ServiceConfig config;
    config.data_dir = o.data_dir;
    config.job_workers = std::max(1u, o.job_workers);
    config.simulation_workers = o.workers;
    service::Service svc(config);
    const int port = svc.bind(o.host, o.port);
    if (port < 0) {
      err << "error: cannot bind " << o.host << ":" << o.port << '\n';
      status = kExitFailure;
    } else {
      std::jthread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        svc.stop();
      });
      out << "listening on http://" << o.host << ":" << port << std::endl;
      svc.listen_after_bind();
      pthread_kill(waiter.native_handle(), SIGTERM);
    }
  }
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);
  return status;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scenario evaluation with vector autoregression and Monte Carlo simulation", "scenvar"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--data-dir", o.data_dir, "Data directory (env SCENVAR_DATA_DIR, default ./data)");

  auto* ingest = app.add_subcommand("ingest", "Ingest CSV files into the catalog and clean them");
  ingest->add_option("csv", o.csv_files, "CSV files")->required()->check(CLI::ExistingFile);
  ingest->add_option("--missing", o.missing, "Missing values: interpolate or drop")
      ->check(CLI::IsMember({"interpolate", "drop"}));
  ingest->add_option("--outlier-z", o.outlier_z, "Outlier z-score threshold")->check(CLI::PositiveNumber);
  ingest->add_option("--outlier-action", o.outlier_action, "winsorize or drop")
      ->check(CLI::IsMember({"winsorize", "drop"}));
  ingest->add_option("--transform", o.transform, "none or log")->check(CLI::IsMember({"none", "log"}));

  auto* series = app.add_subcommand("series", "Inspect catalog series");
  series->require_subcommand(1);
  auto* series_list = series->add_subcommand("list", "List series keys");
  series_list->add_option("--metric", o.metric);
  series_list->add_option("--item", o.item);
  series_list->add_option("--region", o.region);
  series_list->add_option("--frequency", o.frequency);

  auto* scenario = app.add_subcommand("scenario", "Validate or evaluate scenario documents");
  scenario->require_subcommand(1);
  auto* validate_cmd = scenario->add_subcommand("validate", "Check a scenario against the catalog");
  validate_cmd->add_option("file", o.scenario_file)->required()->check(CLI::ExistingFile);
  validate_cmd->add_option("--max-lag", o.max_lag)->check(CLI::Range(1, 64));

  auto* evaluate_cmd = scenario->add_subcommand("evaluate", "Run the evaluation pipeline");
  evaluate_cmd->add_option("file", o.scenario_file)->required()->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--sims", o.sims, "Monte Carlo simulations")->check(CLI::Range(1, 10'000'000));
  evaluate_cmd->add_option("--seed", o.seed, "RNG seed");
  evaluate_cmd->add_option("--ci", o.ci, "Confidence level in (0, 1)")->check(CLI::Range(0.0, 1.0));
  evaluate_cmd->add_option("--default-std", o.default_std, "Std (pct points) for assumptions without one")
      ->check(CLI::NonNegativeNumber);
  evaluate_cmd->add_flag("--no-noise", o.no_noise, "Disable VAR residual noise");
  evaluate_cmd->add_option("--workers", o.workers, "Simulation threads (0 = all cores)");
  evaluate_cmd->add_option("--criterion", o.criterion, "aic or bic")->check(CLI::IsMember({"aic", "bic"}));
  evaluate_cmd->add_option("--max-lag", o.max_lag)->check(CLI::Range(1, 64));
  evaluate_cmd->add_option("--conditioning", o.conditioning)
      ->check(CLI::IsMember({"path_substitution", "exogenous"}));
  evaluate_cmd->add_option("--format", o.format, "table or json")->check(CLI::IsMember({"table", "json"}));
  evaluate_cmd->add_option("--out", o.out_file, "Write the report to a file");
  evaluate_cmd->add_flag("--timing", o.timing, "Include elapsed time in the output");

  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--host", o.host);
  serve->add_option("--port", o.port)->check(CLI::Range(0, 65535));
  serve->add_option("--job-workers", o.job_workers, "Concurrent evaluations")->check(CLI::Range(1, 64));
  serve->add_option("--workers", o.workers, "Simulation threads per evaluation (0 = all cores)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }
  if (!(o.ci > 0.0 && o.ci < 1.0)) {
    err << "error: --ci must lie strictly between 0 and 1\n";
    return kExitUsage;
  }

  try {
    if (*ingest) return cmd_ingest(o, out, err);
    if (*series_list) return cmd_series_list(o, out, err);
    if (*validate_cmd) return cmd_validate(o, out, err);
    if (*evaluate_cmd) return cmd_evaluate(o, out, err);
    if (*serve) return cmd_serve(o, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace scenvar::cli
