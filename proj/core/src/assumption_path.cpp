#include "scenvar/error.hpp"
#include "scenvar/pipeline.hpp"

#include <cmath>
#include <stdexcept>

namespace scenvar {

AssumptionPath generate_assumption_path(const Assumption& assumption, double last_value, Date origin,
                                        Frequency frequency, int horizon, double drawn_change_pct) {
  if (horizon < 1) throw std::invalid_argument("assumption path horizon must be >= 1");
  if (!std::isfinite(last_value)) throw std::invalid_argument("assumption baseline value is not finite");
  if (std::isnan(drawn_change_pct)) throw std::invalid_argument("drawn change is NaN");

  AssumptionPath out;
  double change = drawn_change_pct;
  if (change < -100.0) {
    change = -100.0;
    out.clamped = true;
  }
  const double full = 1.0 + change / 100.0;
  const auto origin_idx = period_index(origin, frequency);
  const auto first = period_index(assumption.period.start, frequency);
  const auto last = period_index(assumption.period.end, frequency);
  const auto span = last - first + 1;

  out.values.reserve(static_cast<std::size_t>(horizon));
  for (int i = 1; i <= horizon; ++i) {
    const auto idx = origin_idx + i;
    double multiplier = 1.0;
    if (idx >= first && idx <= last) {
      if (assumption.shock_shape == ShockShape::step) {
        multiplier = full;
      } else {
        const double fraction = static_cast<double>(idx - first + 1) / static_cast<double>(span);
        multiplier = 1.0 + (change / 100.0) * fraction;
      }
    }
    out.values.push_back(last_value * multiplier);
  }
  return out;
}

AssumptionPath generate_assumption_path(const Assumption& assumption, const TimeSeries& baseline_series,
                                        int horizon, double drawn_change_pct) {
  if (baseline_series.points.empty())
    throw DegenerateSeriesError("assumption baseline series is empty: " + to_string(baseline_series.key));
  const auto& last = baseline_series.points.back();
  return generate_assumption_path(assumption, last.value, last.date, baseline_series.key.frequency, horizon,
                                  drawn_change_pct);
}

}  // namespace scenvar
