#pragma once

#include "scenvar/calendar.hpp"
#include "scenvar/series.hpp"
#include "scenvar/var.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace scenvar {

struct ImpactResult {
  SeriesKey key;
  std::string label;
  int horizon = 1;  // as requested, in periods of key.frequency
  int step = 1;     // the same horizon in periods of the evaluation frequency
  double predicted_change_pct = 0.0;  // mean of the Monte Carlo samples
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  double std = 0.0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  /// False when the baseline at `step` was ~0 and the numbers above are
  /// absolute differences rather than percentages.
  bool relative = true;
  double baseline_value = 0.0;
  std::vector<double> baseline_path;
  std::vector<double> mean_path;
  std::vector<double> lower_path;
  std::vector<double> upper_path;

  friend bool operator==(const ImpactResult&, const ImpactResult&) = default;
};

struct ModelDiagnostics {
  std::string conditioning;
  std::string criterion;
  int lag_order = 1;
  std::vector<var::LagScore> lag_scores;
  double spectral_radius = 0.0;
  bool stable = false;
  std::vector<std::string> variables;
  std::vector<std::string> exogenous;
  std::vector<std::string> differenced;
  std::vector<double> r_squared;
  std::vector<double> residual_autocorr_lag1;
  long long n_obs = 0;
  long long sample_size = 0;  // aligned observations before lags/differencing
};

struct ConfigEcho {
  std::size_t n_sims = 0;
  std::uint64_t seed = 0;
  double ci_level = 0.95;
  double default_uncertainty_std_pct = 0.0;
  bool include_residual_noise = true;

  friend bool operator==(const ConfigEcho&, const ConfigEcho&) = default;
};

/// Outcome of one scenario evaluation, one ImpactResult per scenario impact
/// in scenario order.
struct EvaluationReport {
  std::string scenario_id;
  std::string scenario_name;
  Frequency frequency = Frequency::annual;
  Date forecast_origin;
  std::vector<Date> step_dates;
  std::vector<ImpactResult> impacts;
  ModelDiagnostics diagnostics;
  var::VarModel model;
  ConfigEcho config;
  std::size_t completed_sims = 0;
  std::size_t aborted_sims = 0;
  std::size_t clamped_draws = 0;
  std::vector<std::string> warnings;
  double elapsed_ms = 0.0;
};

enum class ReportFormat { json, table };

std::optional<ReportFormat> parse_report_format(std::string_view s) noexcept;

struct RenderOptions {
  /// Wall-clock timing varies between runs, so it is left out of the
  /// canonical rendering unless requested.
  bool include_timing = false;
};

/// JSON: the full report, 2-space indent, sorted keys, trailing newline.
/// Table: `Impact | Predicted change (%) | <L>% CI`, one row per impact.
std::string render_report(const EvaluationReport& report, ReportFormat format,
                          const RenderOptions& options = {});

/// One table row, e.g. `price of wheat (uae) | +15.0 | (12.0, 18.0)`.
std::string render_table_row(const ImpactResult& impact);

nlohmann::json report_to_json(const EvaluationReport& report, const RenderOptions& options = {});
EvaluationReport report_from_json(const nlohmann::json& j);

}  // namespace scenvar
