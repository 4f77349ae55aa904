#pragma once

#include "scenvar/series.hpp"

#include <cstddef>

namespace scenvar {

struct CleaningReport {
  std::size_t duplicates_removed = 0;
  std::size_t missing_dropped = 0;
  std::size_t missing_interpolated = 0;
  std::size_t outliers_winsorized = 0;
  std::size_t outliers_dropped = 0;
  bool log_transformed = false;

  std::size_t total_modifications() const noexcept {
    return duplicates_removed + missing_dropped + missing_interpolated + outliers_winsorized +
           outliers_dropped + (log_transformed ? 1 : 0);
  }
  CleaningReport& operator+=(const CleaningReport& other) noexcept;
  friend bool operator==(const CleaningReport&, const CleaningReport&) = default;
};

struct CleanResult {
  TimeSeries series;
  CleaningReport report;
};

/// Cleans one series. Steps, in order: stable sort and first-wins duplicate
/// removal; missing values (NaN and holes in the period grid) dropped or
/// linearly interpolated; single-pass z-score outlier handling against the
/// whole series (sample std); optional log transform.
///
/// A series already cleaned under `policy` is returned unchanged with an
/// all-zero report.
CleanResult clean_series(const TimeSeries& series, const CleaningPolicy& policy = {});

}  // namespace scenvar
