#pragma once

#include "scenvar/calendar.hpp"
#include "scenvar/cleaning_policy.hpp"

#include <compare>
#include <optional>
#include <string>
#include <vector>

namespace scenvar {

/// Identity of a series in the catalog. All labels are canonical (see
/// SynonymTable::normalize). Ordering is lexicographic over
/// (metric, item, region, secondary_region, frequency).
struct SeriesKey {
  std::string metric;
  std::string item;
  std::string region;
  std::optional<std::string> secondary_region;
  Frequency frequency = Frequency::annual;

  friend auto operator<=>(const SeriesKey&, const SeriesKey&) = default;
  friend bool operator==(const SeriesKey&, const SeriesKey&) = default;
};

/// `metric/item/region[>secondary]@frequency`, e.g. `price/wheat/uae@annual`.
std::string to_string(const SeriesKey& key);

/// Human label used in reports: `price of wheat (uae)` or
/// `import of wheat (russia -> uae)`.
std::string display_label(const SeriesKey& key);

struct Observation {
  Date date;
  double value = 0.0;

  friend bool operator==(const Observation&, const Observation&) = default;
};

/// Observation sequence for one key. Before cleaning, points may be unordered,
/// duplicated or missing (NaN); after cleaning they are strictly increasing,
/// finite and on the period grid of `key.frequency`.
struct TimeSeries {
  SeriesKey key;
  std::vector<Observation> points;
  std::string unit;
  std::string source;
  bool log_scale = false;
  /// Policy under which the points were last cleaned, if any.
  std::optional<CleaningPolicy> cleaned_with;

  bool empty() const noexcept { return points.empty(); }
  std::size_t size() const noexcept { return points.size(); }
};

/// True when points are strictly increasing, finite and period-aligned.
bool satisfies_invariants(const TimeSeries& series);

/// Partial key used by Catalog::query; unset fields match anything.
struct KeyFilter {
  std::optional<std::string> metric;
  std::optional<std::string> item;
  std::optional<std::string> region;
  std::optional<std::string> secondary_region;
  std::optional<Frequency> frequency;

  bool matches(const SeriesKey& key) const;
};

}  // namespace scenvar
