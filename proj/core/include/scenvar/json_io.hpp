#pragma once

#include "scenvar/catalog.hpp"
#include "scenvar/cleaning.hpp"
#include "scenvar/scenario.hpp"
#include "scenvar/series.hpp"

#include <nlohmann/json.hpp>

namespace scenvar {

// nlohmann::json adapters for catalog types. SeriesKey serializes as
// {metric, item, region, secondary_region?, frequency}; secondary_region is
// omitted when absent.
void to_json(nlohmann::json& j, const SeriesKey& key);
void from_json(const nlohmann::json& j, SeriesKey& key);

void to_json(nlohmann::json& j, const CleaningPolicy& policy);
void from_json(const nlohmann::json& j, CleaningPolicy& policy);

void to_json(nlohmann::json& j, const CleaningReport& report);
void from_json(const nlohmann::json& j, CleaningReport& report);

void to_json(nlohmann::json& j, const IngestSummary& summary);

/// {severity: "error"|"warning", code, message, path}
void to_json(nlohmann::json& j, const Finding& finding);
/// {valid, error_count, findings}
void to_json(nlohmann::json& j, const ValidationReport& report);

/// Non-finite doubles become null (JSON has no NaN/inf); null reads back as NaN.
nlohmann::json number_or_null(double value);
double number_from(const nlohmann::json& j);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

}  // namespace scenvar
