#include "scenvar/scenario.hpp"

#include "test_paths.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <random>

using namespace scenvar;
using nlohmann::json;
using namespace std::chrono;

namespace {

json minimal_doc() {
  return json::parse(R"({
    "id": "s1", "name": "minimal",
    "assumptions": [{"metric": "production", "item": "wheat", "region": "russia", "frequency": "annual",
                     "change_pct": -50, "period": {"start": "2023-01-01", "end": "2025-12-31"}}],
    "impacts": [{"metric": "price", "item": "wheat", "region": "uae", "frequency": "annual", "horizon": 3}]
  })");
}

std::vector<Finding> findings_of(const std::string& doc) {
  try {
    parse_scenario(doc);
  } catch (const ScenarioParseError& e) {
    return e.findings();
  }
  return {};
}

bool has_code(const std::vector<Finding>& f, std::string_view code, std::string_view path = {}) {
  return std::any_of(f.begin(), f.end(),
                     [&](const Finding& x) { return x.code == code && (path.empty() || x.path == path); });
}

}  // namespace

TEST(Scenario, ParsesCaseStudyDocument) {
  const auto s = parse_scenario(fixture::read_fixture("uae_wheat.json"));
  EXPECT_EQ(s.assumptions.size(), 3u);
  EXPECT_EQ(s.impacts.size(), 4u);
  EXPECT_EQ(s.assumptions[0].key.region, "russia");
  EXPECT_EQ(s.assumptions[0].change_pct, -50);
  EXPECT_EQ(s.assumptions[1].change_pct, -100);
  EXPECT_EQ(s.assumptions[2].key.region, "uae");
  EXPECT_EQ(s.assumptions[2].change_pct, 5);
  EXPECT_EQ(s.impacts[0].key.region, "uae");
  EXPECT_EQ(s.impacts[3].key.metric, "nutritional_value");
  EXPECT_EQ(s.impacts[3].key.item, "diet");
}

TEST(Scenario, MinimalDocument) {
  const auto s = parse_scenario(minimal_doc().dump());
  EXPECT_EQ(s.id, "s1");
  ASSERT_EQ(s.assumptions.size(), 1u);
  EXPECT_EQ(s.assumptions[0].shock_shape, ShockShape::step);
  EXPECT_FALSE(s.assumptions[0].uncertainty_std_pct);
  EXPECT_EQ(s.assumptions[0].period.start, 2023y / January / 1);
  EXPECT_EQ(s.impacts[0].horizon, 3);
}

TEST(Scenario, EmptyAssumptionsRejected) {
  auto doc = minimal_doc();
  doc["assumptions"] = json::array();
  try {
    parse_scenario(doc.dump());
    FAIL() << "expected ScenarioParseError";
  } catch (const ScenarioParseError& e) {
    ASSERT_FALSE(e.findings().empty());
    EXPECT_EQ(e.findings()[0].code, "empty-assumptions");
    EXPECT_EQ(e.findings()[0].message, "assumptions must be non-empty");
  }
}

TEST(Scenario, EmptyImpactsRejected) {
  auto doc = minimal_doc();
  doc["impacts"] = json::array();
  EXPECT_TRUE(has_code(findings_of(doc.dump()), "empty-impacts"));
}

TEST(Scenario, SyntaxError) { EXPECT_TRUE(has_code(findings_of("{\"id\": "), "syntax-error")); }

TEST(Scenario, UnknownFieldsRejectedWithPath) {
  auto doc = minimal_doc();
  doc["assumptions"][0]["chnage_pct"] = 3;
  doc["extra"] = true;
  const auto f = findings_of(doc.dump());
  EXPECT_TRUE(has_code(f, "unknown-field", "assumptions[0].chnage_pct"));
  EXPECT_TRUE(has_code(f, "unknown-field", "extra"));
}

TEST(Scenario, MissingAndMistypedFields) {
  auto doc = minimal_doc();
  doc["impacts"][0].erase("horizon");
  doc["assumptions"][0]["change_pct"] = "-50";
  const auto f = findings_of(doc.dump());
  EXPECT_TRUE(has_code(f, "missing-field", "impacts[0].horizon"));
  EXPECT_TRUE(has_code(f, "invalid-type", "assumptions[0].change_pct"));
}

TEST(Scenario, ValueRanges) {
  auto doc = minimal_doc();
  doc["assumptions"][0]["change_pct"] = -100;
  EXPECT_NO_THROW(parse_scenario(doc.dump()));
  doc["assumptions"][0]["change_pct"] = -100.5;
  EXPECT_TRUE(has_code(findings_of(doc.dump()), "change-out-of-range"));

  doc = minimal_doc();
  doc["assumptions"][0]["uncertainty_std_pct"] = -1;
  EXPECT_TRUE(has_code(findings_of(doc.dump()), "invalid-uncertainty"));

  doc = minimal_doc();
  doc["assumptions"][0]["period"] = {{"start", "2025-01-01"}, {"end", "2023-01-01"}};
  EXPECT_TRUE(has_code(findings_of(doc.dump()), "invalid-period"));

  doc = minimal_doc();
  doc["impacts"][0]["horizon"] = 0;
  EXPECT_TRUE(has_code(findings_of(doc.dump()), "invalid-horizon"));

  doc = minimal_doc();
  doc["assumptions"][0]["frequency"] = "hourly";
  EXPECT_TRUE(has_code(findings_of(doc.dump()), "invalid-value", "assumptions[0].frequency"));

  doc = minimal_doc();
  doc["assumptions"][0]["shock_shape"] = "spike";
  EXPECT_TRUE(has_code(findings_of(doc.dump()), "invalid-value", "assumptions[0].shock_shape"));
}

TEST(Scenario, DuplicateAndCollidingKeys) {
  auto doc = minimal_doc();
  doc["assumptions"].push_back(doc["assumptions"][0]);
  doc["assumptions"][1]["region"] = "Russian Federation";  // same key after normalization
  EXPECT_TRUE(has_code(findings_of(doc.dump()), "duplicate-assumption", "assumptions[1]"));

  doc = minimal_doc();
  doc["impacts"][0]["metric"] = "production";
  doc["impacts"][0]["region"] = "russia";
  EXPECT_TRUE(has_code(findings_of(doc.dump()), "impact-is-assumption"));
}

TEST(Scenario, ReportsEveryProblem) {
  auto doc = minimal_doc();
  doc["assumptions"][0].erase("metric");
  doc["impacts"][0]["horizon"] = -2;
  doc["name"] = 5;
  EXPECT_GE(findings_of(doc.dump()).size(), 3u);
}

TEST(Scenario, SerializeParseRoundTrip) {
  const auto s = parse_scenario(fixture::read_fixture("uae_wheat.json"));
  EXPECT_EQ(parse_scenario(serialize_scenario(s)), s);
  EXPECT_EQ(serialize_scenario(parse_scenario(serialize_scenario(s))), serialize_scenario(s));
}

TEST(Scenario, RandomScenariosRoundTrip) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> change(-100, 300), sd(0, 20);
  std::uniform_int_distribution<int> count(1, 4), horizon(1, 40), year(2023, 2030);
  const std::vector<std::string> regions{"uae", "russia", "ukraine", "egypt", "india"};
  for (int t = 0; t < 100; ++t) {
    Scenario s;
    s.id = "r" + std::to_string(t);
    s.name = "random \"scenario\" " + std::to_string(t);
    const int na = count(gen);
    for (int i = 0; i < na; ++i) {
      Assumption a;
      a.key = {"production", "wheat", regions[static_cast<std::size_t>(i)], std::nullopt, Frequency::annual};
      a.change_pct = change(gen);
      const int y = year(gen);
      a.period = {std::chrono::year{y} / January / 1, std::chrono::year{y + 2} / December / 31};
      a.shock_shape = t % 2 ? ShockShape::linear_ramp : ShockShape::step;
      if (t % 3) a.uncertainty_std_pct = sd(gen);
      s.assumptions.push_back(a);
    }
    const int ni = count(gen);
    for (int i = 0; i < ni; ++i) {
      SeriesKey key{"import", "wheat", "uae", regions[static_cast<std::size_t>(i + 1)], Frequency::monthly};
      s.impacts.push_back({key, horizon(gen)});
    }
    ASSERT_EQ(parse_scenario(serialize_scenario(s)), s) << serialize_scenario(s);
  }
}

TEST(Scenario, CommonFrequencyAndHorizonConversion) {
  auto s = parse_scenario(minimal_doc().dump());
  EXPECT_EQ(common_frequency(s), Frequency::annual);
  Impact monthly{{"price", "wheat", "uae", std::nullopt, Frequency::monthly}, 24};
  EXPECT_EQ(horizon_steps(monthly, Frequency::annual), 2);
  monthly.horizon = 25;
  EXPECT_EQ(horizon_steps(monthly, Frequency::annual), 3);
  Impact weekly{{"price", "wheat", "uae", std::nullopt, Frequency::weekly}, 52};
  EXPECT_EQ(horizon_steps(weekly, Frequency::annual), 1);
  EXPECT_EQ(horizon_steps(weekly, Frequency::weekly), 52);
}
