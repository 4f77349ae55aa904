#include "scenvar/json_io.hpp"

#include "scenvar/error.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace scenvar {

using nlohmann::json;

namespace {

Frequency frequency_from(const json& j) {
  const auto token = j.get<std::string>();
  const auto f = parse_frequency(token);
  if (!f) throw FormatError("unknown frequency '" + token + "'");
  return *f;
}

std::string_view to_string(MissingStrategy s) {
  return s == MissingStrategy::drop ? "drop" : "linear_interpolate";
}
std::string_view to_string(OutlierAction a) { return a == OutlierAction::drop ? "drop" : "winsorize"; }
std::string_view to_string(Transform t) { return t == Transform::log ? "log" : "none"; }

}  // namespace

void to_json(json& j, const SeriesKey& key) {
  j = json{{"metric", key.metric}, {"item", key.item}, {"region", key.region},
           {"frequency", to_string(key.frequency)}};
  if (key.secondary_region) j["secondary_region"] = *key.secondary_region;
}

void from_json(const json& j, SeriesKey& key) {
  key.metric = j.at("metric").get<std::string>();
  key.item = j.at("item").get<std::string>();
  key.region = j.at("region").get<std::string>();
  key.secondary_region.reset();
  if (auto it = j.find("secondary_region"); it != j.end() && !it->is_null())
    key.secondary_region = it->get<std::string>();
  key.frequency = frequency_from(j.at("frequency"));
}

void to_json(json& j, const CleaningPolicy& policy) {
  j = json{{"missing_strategy", to_string(policy.missing_strategy)},
           {"outlier_z_threshold", policy.outlier_z_threshold},
           {"outlier_action", to_string(policy.outlier_action)},
           {"transform", to_string(policy.transform)}};
}

void from_json(const json& j, CleaningPolicy& policy) {
  policy = CleaningPolicy{};
  const auto missing = j.value("missing_strategy", std::string("linear_interpolate"));
  policy.missing_strategy = missing == "drop" ? MissingStrategy::drop : MissingStrategy::linear_interpolate;
  policy.outlier_z_threshold = j.value("outlier_z_threshold", 4.0);
  policy.outlier_action = j.value("outlier_action", std::string("winsorize")) == "drop"
                              ? OutlierAction::drop
                              : OutlierAction::winsorize;
  policy.transform = j.value("transform", std::string("none")) == "log" ? Transform::log : Transform::none;
}

void to_json(json& j, const CleaningReport& r) {
  j = json{{"duplicates_removed", r.duplicates_removed},
           {"missing_dropped", r.missing_dropped},
           {"missing_interpolated", r.missing_interpolated},
           {"outliers_winsorized", r.outliers_winsorized},
           {"outliers_dropped", r.outliers_dropped},
           {"log_transformed", r.log_transformed}};
}

void from_json(const json& j, CleaningReport& r) {
  r.duplicates_removed = j.value("duplicates_removed", std::size_t{0});
  r.missing_dropped = j.value("missing_dropped", std::size_t{0});
  r.missing_interpolated = j.value("missing_interpolated", std::size_t{0});
  r.outliers_winsorized = j.value("outliers_winsorized", std::size_t{0});
  r.outliers_dropped = j.value("outliers_dropped", std::size_t{0});
  r.log_transformed = j.value("log_transformed", false);
}

void to_json(json& j, const IngestSummary& summary) {
  j = json{{"accepted", summary.accepted},
           {"rejected", summary.rejected},
           {"series_created", summary.series_created},
           {"rejections", json::array()}};
  for (const auto& r : summary.rejections)
    j["rejections"].push_back({{"line", r.line}, {"reason", r.reason}, {"message", r.message}});
}

void to_json(json& j, const Finding& finding) {
  j = json{{"severity", finding.severity == Severity::error ? "error" : "warning"},
           {"code", finding.code},
           {"message", finding.message},
           {"path", finding.path}};
}

void to_json(json& j, const ValidationReport& report) {
  j = json{{"valid", report.valid()}, {"error_count", report.error_count()}, {"findings", report.findings}};
}

json number_or_null(double value) {
  if (std::isfinite(value)) return value;
  return nullptr;
}

double number_from(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

}  // namespace scenvar
