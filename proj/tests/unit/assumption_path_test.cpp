#include "scenvar/error.hpp"
#include "scenvar/pipeline.hpp"

#include <gtest/gtest.h>

using namespace scenvar;
using namespace std::chrono;

namespace {

Assumption assumption(ShockShape shape, Date start, Date end) {
  Assumption a;
  a.key = {"production", "wheat", "russia", std::nullopt, Frequency::annual};
  a.period = {start, end};
  a.shock_shape = shape;
  return a;
}

const Date kOrigin = 2022y / January / 1;

}  // namespace

TEST(AssumptionPath, StepHalvesLevel) {
  const auto a = assumption(ShockShape::step, 2023y / January / 1, 2030y / December / 31);
  const auto p = generate_assumption_path(a, 200.0, kOrigin, Frequency::annual, 3, -50);
  EXPECT_EQ(p.values, (std::vector<double>{100, 100, 100}));
  EXPECT_FALSE(p.clamped);
}

TEST(AssumptionPath, ZeroChangeIsFlat) {
  const auto a = assumption(ShockShape::linear_ramp, 2023y / January / 1, 2025y / December / 31);
  const auto p = generate_assumption_path(a, 37.5, kOrigin, Frequency::annual, 5, 0);
  EXPECT_EQ(p.values, std::vector<double>(5, 37.5));
}

TEST(AssumptionPath, LinearRamp) {
  const auto a = assumption(ShockShape::linear_ramp, 2023y / January / 1, 2026y / December / 31);
  const auto p = generate_assumption_path(a, 100.0, kOrigin, Frequency::annual, 4, 100);
  EXPECT_EQ(p.values, (std::vector<double>{125, 150, 175, 200}));
}

TEST(AssumptionPath, OutsidePeriodKeepsLastValue) {
  const auto a = assumption(ShockShape::step, 2024y / January / 1, 2025y / June / 30);
  const auto p = generate_assumption_path(a, 10.0, kOrigin, Frequency::annual, 5, 20);
  EXPECT_EQ(p.values, (std::vector<double>{10, 12, 12, 10, 10}));
}

TEST(AssumptionPath, MonthlySteps) {
  const auto a = assumption(ShockShape::step, 2022y / March / 1, 2022y / April / 30);
  const auto p = generate_assumption_path(a, 10.0, 2022y / January / 1, Frequency::monthly, 4, -10);
  EXPECT_EQ(p.values, (std::vector<double>{10, 9, 9, 10}));
}

TEST(AssumptionPath, DrawBelowMinusHundredClamps) {
  const auto a = assumption(ShockShape::step, 2023y / January / 1, 2030y / December / 31);
  const auto p = generate_assumption_path(a, 50.0, kOrigin, Frequency::annual, 2, -130);
  EXPECT_TRUE(p.clamped);
  EXPECT_EQ(p.values, (std::vector<double>{0, 0}));
}

TEST(AssumptionPath, FromSeries) {
  TimeSeries s;
  s.key = {"production", "wheat", "russia", std::nullopt, Frequency::annual};
  s.points = {{2021y / January / 1, 80.0}, {2022y / January / 1, 90.0}};
  const auto a = assumption(ShockShape::step, 2023y / January / 1, 2023y / December / 31);
  EXPECT_EQ(generate_assumption_path(a, s, 2, -50).values, (std::vector<double>{45, 90}));
  s.points.clear();
  EXPECT_THROW(generate_assumption_path(a, s, 2, -50), DegenerateSeriesError);
  EXPECT_THROW(generate_assumption_path(a, 1.0, kOrigin, Frequency::annual, 0, 0), std::invalid_argument);
}
