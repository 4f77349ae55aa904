#include "scenvar/series.hpp"

#include <cmath>

namespace scenvar {

std::string to_string(const SeriesKey& key) {
  std::string out = key.metric + "/" + key.item + "/" + key.region;
  if (key.secondary_region) out += ">" + *key.secondary_region;
  out += "@";
  out += to_string(key.frequency);
  return out;
}

std::string display_label(const SeriesKey& key) {
  std::string out = key.metric + " of " + key.item + " (" + key.region;
  if (key.secondary_region) out += " -> " + *key.secondary_region;
  out += ")";
  return out;
}

bool satisfies_invariants(const TimeSeries& series) {
  for (std::size_t i = 0; i < series.points.size(); ++i) {
    const auto& pt = series.points[i];
    if (!std::isfinite(pt.value)) return false;
    if (snap_to_period(pt.date, series.key.frequency) != pt.date) return false;
    if (i > 0 && !(series.points[i - 1].date < pt.date)) return false;
  }
  return true;
}

bool KeyFilter::matches(const SeriesKey& key) const {
  if (metric && !metric->empty() && *metric != key.metric) return false;
  if (item && !item->empty() && *item != key.item) return false;
  if (region && !region->empty() && *region != key.region) return false;
  if (secondary_region && !secondary_region->empty() && secondary_region != key.secondary_region)
    return false;
  if (frequency && *frequency != key.frequency) return false;
  return true;
}

}  // namespace scenvar
