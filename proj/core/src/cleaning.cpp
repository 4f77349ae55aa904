#include "scenvar/cleaning.hpp"

#include "scenvar/error.hpp"

#include <algorithm>
#include <cmath>

namespace scenvar {

CleaningReport& CleaningReport::operator+=(const CleaningReport& other) noexcept {
  duplicates_removed += other.duplicates_removed;
  missing_dropped += other.missing_dropped;
  missing_interpolated += other.missing_interpolated;
  outliers_winsorized += other.outliers_winsorized;
  outliers_dropped += other.outliers_dropped;
  log_transformed = log_transformed || other.log_transformed;
  return *this;
}

namespace {

std::size_t remove_duplicates(std::vector<Observation>& pts, Frequency f) {
  for (auto& pt : pts) pt.date = snap_to_period(pt.date, f);
  std::stable_sort(pts.begin(), pts.end(),
                   [](const Observation& a, const Observation& b) { return a.date < b.date; });
  const auto before = pts.size();
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Observation& a, const Observation& b) { return a.date == b.date; }),
            pts.end());
  return before - pts.size();
}

void handle_missing(std::vector<Observation>& pts, Frequency f, MissingStrategy strategy,
                    CleaningReport& report) {
  std::vector<Observation> finite;
  finite.reserve(pts.size());
  for (const auto& pt : pts)
    if (std::isfinite(pt.value)) finite.push_back(pt);

  if (strategy == MissingStrategy::drop || finite.empty()) {
    report.missing_dropped += pts.size() - finite.size();
    pts = std::move(finite);
    return;
  }

  // Interior holes (NaN points or absent periods) are filled on the period
  // grid; NaNs outside the first/last finite point cannot be interpolated.
  const auto first = period_index(finite.front().date, f);
  const auto last = period_index(finite.back().date, f);
  std::size_t outside = 0;
  for (const auto& pt : pts) {
    if (std::isfinite(pt.value)) continue;
    const auto idx = period_index(pt.date, f);
    if (idx < first || idx > last) ++outside;
  }
  report.missing_dropped += outside;

  std::vector<Observation> filled;
  filled.reserve(static_cast<std::size_t>(last - first + 1));
  for (std::size_t i = 0; i < finite.size(); ++i) {
    filled.push_back(finite[i]);
    if (i + 1 == finite.size()) break;
    const auto ia = period_index(finite[i].date, f);
    const auto ib = period_index(finite[i + 1].date, f);
    const double va = finite[i].value;
    const double vb = finite[i + 1].value;
    for (auto idx = ia + 1; idx < ib; ++idx) {
      const double w = static_cast<double>(idx - ia) / static_cast<double>(ib - ia);
      filled.push_back({period_start(idx, f), va + w * (vb - va)});
      ++report.missing_interpolated;
    }
  }
  pts = std::move(filled);
}

void handle_outliers(std::vector<Observation>& pts, const CleaningPolicy& policy,
                     CleaningReport& report) {
  const auto n = pts.size();
  if (n < 2) return;
  double mean = 0.0;
  for (const auto& pt : pts) mean += pt.value;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (const auto& pt : pts) ss += (pt.value - mean) * (pt.value - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) return;

  const double t = policy.outlier_z_threshold;
  std::vector<Observation> kept;
  kept.reserve(n);
  for (auto pt : pts) {
    const double z = (pt.value - mean) / sd;
    if (std::abs(z) <= t) {
      kept.push_back(pt);
    } else if (policy.outlier_action == OutlierAction::winsorize) {
      pt.value = z > 0 ? mean + t * sd : mean - t * sd;
      kept.push_back(pt);
      ++report.outliers_winsorized;
    } else {
      ++report.outliers_dropped;
    }
  }
  pts = std::move(kept);
}

}  // namespace

CleanResult clean_series(const TimeSeries& series, const CleaningPolicy& policy) {
  if (!(policy.outlier_z_threshold > 0.0) || !std::isfinite(policy.outlier_z_threshold))
    throw Error("invalid-policy", "outlier z threshold must be a positive finite number");
  if (series.cleaned_with && *series.cleaned_with == policy) return {series, {}};
  if (series.empty()) throw DegenerateSeriesError(to_string(series.key) + ": series has no points");

  CleanResult result{series, {}};
  auto& pts = result.series.points;
  auto& report = result.report;
  const auto f = series.key.frequency;

  report.duplicates_removed = remove_duplicates(pts, f);
  handle_missing(pts, f, policy.missing_strategy, report);
  handle_outliers(pts, policy, report);

  if (policy.transform == Transform::log && !result.series.log_scale) {
    for (const auto& pt : pts)
      if (!(pt.value > 0.0))
        throw TransformError(to_string(series.key) +
                             ": log transform requires strictly positive values");
    for (auto& pt : pts) pt.value = std::log(pt.value);
    result.series.log_scale = true;
    report.log_transformed = true;
  }

  if (pts.empty())
    throw DegenerateSeriesError(to_string(series.key) + ": series is empty after cleaning");
  result.series.cleaned_with = policy;
  return result;
}

}  // namespace scenvar
