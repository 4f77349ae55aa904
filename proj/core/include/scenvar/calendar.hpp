#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace scenvar {

using Date = std::chrono::year_month_day;

/// Observation frequency. Enumerators are ordered by period length so that
/// `a < b` reads as "a is finer than b".
enum class Frequency : std::uint8_t { daily = 0, weekly = 1, monthly = 2, annual = 3 };

std::string_view to_string(Frequency f) noexcept;
std::optional<Frequency> parse_frequency(std::string_view token) noexcept;

/// Nominal period length in days, used only to convert horizons between
/// frequencies.
double nominal_days(Frequency f) noexcept;

/// Strict ISO-8601 calendar date, `YYYY-MM-DD`.
std::optional<Date> parse_date(std::string_view text) noexcept;
std::string format_date(Date d);

/// Index of the period containing `d`: the year for annual data, months since
/// year 0 for monthly, ISO weeks (Monday-based) since the epoch for weekly and
/// days since the epoch for daily.
std::int64_t period_index(Date d, Frequency f) noexcept;

/// First day of the period with the given index.
Date period_start(std::int64_t index, Frequency f) noexcept;

inline Date snap_to_period(Date d, Frequency f) noexcept {
  return period_start(period_index(d, f), f);
}

inline Date advance(Date d, Frequency f, std::int64_t periods) noexcept {
  return period_start(period_index(d, f) + periods, f);
}

/// Closed date interval.
struct DateRange {
  Date start;
  Date end;

  bool contains(Date d) const noexcept { return start <= d && d <= end; }
  bool empty() const noexcept { return end < start; }
  friend bool operator==(const DateRange&, const DateRange&) = default;

  static DateRange unbounded() noexcept;
};

}  // namespace scenvar
