#include "scenvar/calendar.hpp"

#include <gtest/gtest.h>

using namespace scenvar;
using namespace std::chrono;

namespace {
Date d(int y, unsigned m, unsigned day) { return year{y} / month{m} / std::chrono::day{day}; }
}  // namespace

TEST(Calendar, FrequencyOrderFollowsPeriodLength) {
  EXPECT_LT(Frequency::daily, Frequency::weekly);
  EXPECT_LT(Frequency::weekly, Frequency::monthly);
  EXPECT_LT(Frequency::monthly, Frequency::annual);
  EXPECT_LT(nominal_days(Frequency::monthly), nominal_days(Frequency::annual));
}

TEST(Calendar, FrequencyTokensRoundTrip) {
  for (auto f : {Frequency::daily, Frequency::weekly, Frequency::monthly, Frequency::annual})
    EXPECT_EQ(parse_frequency(to_string(f)), f);
  EXPECT_FALSE(parse_frequency("quarterly"));
  EXPECT_FALSE(parse_frequency("Annual"));
}

TEST(Calendar, ParseDateIsStrict) {
  EXPECT_EQ(parse_date("2024-02-29"), d(2024, 2, 29));
  EXPECT_FALSE(parse_date("2023-02-29"));
  EXPECT_FALSE(parse_date("2024-2-01"));
  EXPECT_FALSE(parse_date("2024-02-01T00:00"));
  EXPECT_FALSE(parse_date(""));
  EXPECT_EQ(format_date(d(2024, 3, 7)), "2024-03-07");
}

TEST(Calendar, SnapToPeriodStart) {
  EXPECT_EQ(snap_to_period(d(2021, 7, 15), Frequency::annual), d(2021, 1, 1));
  EXPECT_EQ(snap_to_period(d(2021, 7, 15), Frequency::monthly), d(2021, 7, 1));
  // 2024-01-03 is a Wednesday; its week starts Monday 2024-01-01
  EXPECT_EQ(snap_to_period(d(2024, 1, 3), Frequency::weekly), d(2024, 1, 1));
  EXPECT_EQ(snap_to_period(d(2024, 1, 7), Frequency::weekly), d(2024, 1, 1));
  EXPECT_EQ(snap_to_period(d(2024, 1, 8), Frequency::weekly), d(2024, 1, 8));
  EXPECT_EQ(snap_to_period(d(2024, 1, 3), Frequency::daily), d(2024, 1, 3));
}

TEST(Calendar, PeriodIndexIsConsecutive) {
  EXPECT_EQ(period_index(d(2022, 1, 1), Frequency::annual) + 1, period_index(d(2023, 6, 1), Frequency::annual));
  EXPECT_EQ(period_index(d(2022, 12, 31), Frequency::monthly) + 1, period_index(d(2023, 1, 1), Frequency::monthly));
  EXPECT_EQ(period_index(d(2024, 1, 7), Frequency::weekly) + 1, period_index(d(2024, 1, 8), Frequency::weekly));
  EXPECT_EQ(period_index(d(2024, 2, 28), Frequency::daily) + 2, period_index(d(2024, 3, 1), Frequency::daily));
}

TEST(Calendar, AdvanceMovesWholePeriods) {
  EXPECT_EQ(advance(d(2022, 1, 1), Frequency::annual, 3), d(2025, 1, 1));
  EXPECT_EQ(advance(d(2022, 11, 1), Frequency::monthly, 3), d(2023, 2, 1));
  EXPECT_EQ(advance(d(2024, 1, 1), Frequency::weekly, 1), d(2024, 1, 8));
  EXPECT_EQ(advance(d(2024, 2, 28), Frequency::daily, 2), d(2024, 3, 1));
}

TEST(Calendar, DateRangeIsClosed) {
  const DateRange r{d(2023, 1, 1), d(2023, 12, 31)};
  EXPECT_TRUE(r.contains(d(2023, 1, 1)));
  EXPECT_TRUE(r.contains(d(2023, 12, 31)));
  EXPECT_FALSE(r.contains(d(2024, 1, 1)));
  EXPECT_FALSE(r.empty());
  EXPECT_TRUE((DateRange{d(2024, 1, 1), d(2023, 1, 1)}).empty());
}
