#include "scenvar/report.hpp"

#include "scenvar/error.hpp"
#include "scenvar/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace scenvar {

using nlohmann::json;

std::optional<ReportFormat> parse_report_format(std::string_view s) noexcept {
  if (s == "json") return ReportFormat::json;
  if (s == "table") return ReportFormat::table;
  return std::nullopt;
}

namespace {

json numbers(const std::vector<double>& values) {
  json out = json::array();
  for (double v : values) out.push_back(number_or_null(v));
  return out;
}

std::vector<double> numbers_from(const json& j) {
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number_from(v));
  return out;
}

json impact_to_json(const ImpactResult& r) {
  return json{{"key", r.key},
              {"label", r.label},
              {"horizon", r.horizon},
              {"step", r.step},
              {"predicted_change_pct", number_or_null(r.predicted_change_pct)},
              {"ci", {{"lower", number_or_null(r.ci_lower)}, {"upper", number_or_null(r.ci_upper)}}},
              {"std", number_or_null(r.std)},
              {"median", number_or_null(r.median)},
              {"iqr", {{"q25", number_or_null(r.q25)}, {"q75", number_or_null(r.q75)}}},
              {"relative", r.relative},
              {"baseline_value", number_or_null(r.baseline_value)},
              {"paths",
               {{"baseline", numbers(r.baseline_path)},
                {"mean", numbers(r.mean_path)},
                {"lower", numbers(r.lower_path)},
                {"upper", numbers(r.upper_path)}}}};
}

ImpactResult impact_from_json(const json& j) {
  ImpactResult r;
  r.key = j.at("key").get<SeriesKey>();
  r.label = j.at("label").get<std::string>();
  r.horizon = j.at("horizon").get<int>();
  r.step = j.at("step").get<int>();
  r.predicted_change_pct = number_from(j.at("predicted_change_pct"));
  r.ci_lower = number_from(j.at("ci").at("lower"));
  r.ci_upper = number_from(j.at("ci").at("upper"));
  r.std = number_from(j.at("std"));
  r.median = number_from(j.at("median"));
  r.q25 = number_from(j.at("iqr").at("q25"));
  r.q75 = number_from(j.at("iqr").at("q75"));
  r.relative = j.at("relative").get<bool>();
  r.baseline_value = number_from(j.at("baseline_value"));
  const auto& paths = j.at("paths");
  r.baseline_path = numbers_from(paths.at("baseline"));
  r.mean_path = numbers_from(paths.at("mean"));
  r.lower_path = numbers_from(paths.at("lower"));
  r.upper_path = numbers_from(paths.at("upper"));
  return r;
}

Date date_from(const json& j) {
  const auto text = j.get<std::string>();
  const auto d = parse_date(text);
  if (!d) throw FormatError("invalid date in report: " + text);
  return *d;
}

// printf's %+.1f renders values that round to zero as "-0.0"; Table 1 style
// wants "+0.0".
double tidy(double v) { return std::abs(v) < 0.05 ? 0.0 : v; }

std::string fixed1(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, tidy(v));
  return buf;
}

}  // namespace

json report_to_json(const EvaluationReport& report, const RenderOptions& options) {
  json steps = json::array();
  for (const auto& d : report.step_dates) steps.push_back(format_date(d));
  json impacts = json::array();
  for (const auto& r : report.impacts) impacts.push_back(impact_to_json(r));

  const auto& d = report.diagnostics;
  json scores = json::array();
  for (const auto& s : d.lag_scores) scores.push_back({{"p", s.p}, {"score", number_or_null(s.score)}});
  json diagnostics{{"conditioning", d.conditioning},
                   {"criterion", d.criterion},
                   {"lag_order", d.lag_order},
                   {"lag_scores", scores},
                   {"spectral_radius", number_or_null(d.spectral_radius)},
                   {"stable", d.stable},
                   {"variables", d.variables},
                   {"exogenous", d.exogenous},
                   {"differenced", d.differenced},
                   {"r_squared", numbers(d.r_squared)},
                   {"residual_autocorr_lag1", numbers(d.residual_autocorr_lag1)},
                   {"n_obs", d.n_obs},
                   {"sample_size", d.sample_size}};

  json j{{"scenario_id", report.scenario_id},
         {"scenario_name", report.scenario_name},
         {"frequency", std::string(to_string(report.frequency))},
         {"forecast_origin", format_date(report.forecast_origin)},
         {"step_dates", steps},
         {"impacts", impacts},
         {"diagnostics", diagnostics},
         {"model", report.model},
         {"config",
          {{"n_sims", report.config.n_sims},
           {"seed", report.config.seed},
           {"ci_level", report.config.ci_level},
           {"default_uncertainty_std_pct", report.config.default_uncertainty_std_pct},
           {"include_residual_noise", report.config.include_residual_noise}}},
         {"simulations",
          {{"completed", report.completed_sims},
           {"aborted", report.aborted_sims},
           {"clamped_draws", report.clamped_draws}}},
         {"warnings", report.warnings}};
  if (options.include_timing) j["elapsed_ms"] = report.elapsed_ms;
  return j;
}

EvaluationReport report_from_json(const json& j) {
  EvaluationReport report;
  try {
    report.scenario_id = j.at("scenario_id").get<std::string>();
    report.scenario_name = j.at("scenario_name").get<std::string>();
    const auto freq = parse_frequency(j.at("frequency").get<std::string>());
    if (!freq) throw FormatError("unknown frequency in report");
    report.frequency = *freq;
    report.forecast_origin = date_from(j.at("forecast_origin"));
    for (const auto& d : j.at("step_dates")) report.step_dates.push_back(date_from(d));
    for (const auto& i : j.at("impacts")) report.impacts.push_back(impact_from_json(i));

    const auto& dj = j.at("diagnostics");
    auto& d = report.diagnostics;
    d.conditioning = dj.at("conditioning").get<std::string>();
    d.criterion = dj.at("criterion").get<std::string>();
    d.lag_order = dj.at("lag_order").get<int>();
    for (const auto& s : dj.at("lag_scores")) d.lag_scores.push_back({s.at("p").get<int>(), number_from(s.at("score"))});
    d.spectral_radius = number_from(dj.at("spectral_radius"));
    d.stable = dj.at("stable").get<bool>();
    d.variables = dj.at("variables").get<std::vector<std::string>>();
    d.exogenous = dj.at("exogenous").get<std::vector<std::string>>();
    d.differenced = dj.at("differenced").get<std::vector<std::string>>();
    d.r_squared = numbers_from(dj.at("r_squared"));
    d.residual_autocorr_lag1 = numbers_from(dj.at("residual_autocorr_lag1"));
    d.n_obs = dj.at("n_obs").get<long long>();
    d.sample_size = dj.at("sample_size").get<long long>();

    report.model = j.at("model").get<var::VarModel>();
    const auto& c = j.at("config");
    report.config.n_sims = c.at("n_sims").get<std::size_t>();
    report.config.seed = c.at("seed").get<std::uint64_t>();
    report.config.ci_level = c.at("ci_level").get<double>();
    report.config.default_uncertainty_std_pct = c.at("default_uncertainty_std_pct").get<double>();
    report.config.include_residual_noise = c.at("include_residual_noise").get<bool>();
    const auto& s = j.at("simulations");
    report.completed_sims = s.at("completed").get<std::size_t>();
    report.aborted_sims = s.at("aborted").get<std::size_t>();
    report.clamped_draws = s.at("clamped_draws").get<std::size_t>();
    report.warnings = j.at("warnings").get<std::vector<std::string>>();
    if (j.contains("elapsed_ms")) report.elapsed_ms = j.at("elapsed_ms").get<double>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed report: ") + e.what());
  }
  return report;
}

std::string render_table_row(const ImpactResult& impact) {
  std::string value = fixed1("%+.1f", impact.predicted_change_pct);
  if (!impact.relative) value += " (abs)";
  return impact.label + " | " + value + " | (" + fixed1("%.1f", impact.ci_lower) + ", " +
         fixed1("%.1f", impact.ci_upper) + ")";
}

std::string render_report(const EvaluationReport& report, ReportFormat format, const RenderOptions& options) {
  if (format == ReportFormat::json) return report_to_json(report, options).dump(2) + "\n";

  std::ostringstream out;
  char level[32];
  std::snprintf(level, sizeof level, "%g", report.config.ci_level * 100.0);
  out << "Impact | Predicted change (%) | " << level << "% CI\n";
  for (const auto& impact : report.impacts) out << render_table_row(impact) << '\n';
  if (options.include_timing) out << "elapsed: " << fixed1("%.1f", report.elapsed_ms) << " ms\n";
  return out.str();
}

}  // namespace scenvar
