#include "scenvar/calendar.hpp"

#include <charconv>
#include <cstdio>

namespace scenvar {

namespace {

using std::chrono::days;
using std::chrono::sys_days;

// 1970-01-01 is a Thursday; shifting by 3 days puts week boundaries on Mondays.
constexpr std::int64_t kMondayShift = 3;

std::int64_t floor_div(std::int64_t a, std::int64_t b) noexcept {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool parse_int(std::string_view text, int& out) noexcept {
  if (text.empty()) return false;
  for (char c : text)
    if (c < '0' || c > '9') return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

std::string_view to_string(Frequency f) noexcept {
  switch (f) {
    case Frequency::daily: return "daily";
    case Frequency::weekly: return "weekly";
    case Frequency::monthly: return "monthly";
    case Frequency::annual: return "annual";
  }
  return "annual";
}

std::optional<Frequency> parse_frequency(std::string_view token) noexcept {
  if (token == "annual") return Frequency::annual;
  if (token == "monthly") return Frequency::monthly;
  if (token == "weekly") return Frequency::weekly;
  if (token == "daily") return Frequency::daily;
  return std::nullopt;
}

double nominal_days(Frequency f) noexcept {
  switch (f) {
    case Frequency::daily: return 1.0;
    case Frequency::weekly: return 7.0;
    case Frequency::monthly: return 365.25 / 12.0;
    case Frequency::annual: return 365.25;
  }
  return 1.0;
}

std::optional<Date> parse_date(std::string_view text) noexcept {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0, m = 0, d = 0;
  if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) ||
      !parse_int(text.substr(8, 2), d))
    return std::nullopt;
  Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
            std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_date(Date d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

std::int64_t period_index(Date d, Frequency f) noexcept {
  switch (f) {
    case Frequency::annual: return static_cast<int>(d.year());
    case Frequency::monthly:
      return static_cast<std::int64_t>(static_cast<int>(d.year())) * 12 +
             (static_cast<unsigned>(d.month()) - 1);
    case Frequency::weekly:
      return floor_div(sys_days{d}.time_since_epoch().count() + kMondayShift, 7);
    case Frequency::daily: return sys_days{d}.time_since_epoch().count();
  }
  return 0;
}

Date period_start(std::int64_t index, Frequency f) noexcept {
  using namespace std::chrono;
  switch (f) {
    case Frequency::annual: return year{static_cast<int>(index)} / January / 1;
    case Frequency::monthly: {
      const auto y = floor_div(index, 12);
      const auto m = index - y * 12;
      return year{static_cast<int>(y)} / month{static_cast<unsigned>(m + 1)} / 1;
    }
    case Frequency::weekly: return Date{sys_days{days{index * 7 - kMondayShift}}};
    case Frequency::daily: return Date{sys_days{days{index}}};
  }
  return Date{};
}

DateRange DateRange::unbounded() noexcept {
  using namespace std::chrono;
  return {year{-9999} / January / 1, year{9999} / December / 31};
}

}  // namespace scenvar
