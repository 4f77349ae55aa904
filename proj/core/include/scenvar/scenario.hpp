#pragma once

#include "scenvar/calendar.hpp"
#include "scenvar/labels.hpp"
#include "scenvar/series.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace scenvar {

enum class ShockShape { step, linear_ramp };

std::string_view to_string(ShockShape shape) noexcept;

/// A user-specified percent change on one series over a period. A change of
/// -100 (total elimination) is legal; anything below is not.
struct Assumption {
  SeriesKey key;
  double change_pct = 0.0;
  DateRange period;
  ShockShape shock_shape = ShockShape::step;
  /// Std of the Normal draw around change_pct in Monte Carlo, in percentage
  /// points. Absent means "use SimulationConfig::default_uncertainty_std_pct".
  std::optional<double> uncertainty_std_pct;

  friend bool operator==(const Assumption&, const Assumption&) = default;
};

/// A series whose change is predicted `horizon` periods (at key.frequency)
/// past the forecast origin.
struct Impact {
  SeriesKey key;
  int horizon = 1;

  friend bool operator==(const Impact&, const Impact&) = default;
};

struct Scenario {
  std::string id;
  std::string name;
  std::vector<Assumption> assumptions;
  std::vector<Impact> impacts;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

enum class Severity { error, warning };

struct Finding {
  Severity severity = Severity::error;
  std::string code;
  std::string message;
  std::string path;  // e.g. "assumptions[1].change_pct"

  friend bool operator==(const Finding&, const Finding&) = default;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool valid() const noexcept;
  std::size_t error_count() const noexcept;
  bool has(std::string_view code) const noexcept;
  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

/// Thrown by parse_scenario. Field-level problems are collected, so
/// `findings()` lists every problem found, each with its document path.
class ScenarioParseError : public std::runtime_error {
 public:
  ScenarioParseError(const std::string& message, std::vector<Finding> findings);
  const std::vector<Finding>& findings() const noexcept { return findings_; }

 private:
  std::vector<Finding> findings_;
};

/// Strict parser for the scenario JSON document. Unknown fields are errors.
/// Labels pass through `synonyms`. On success the result satisfies every
/// Scenario invariant (non-empty lists, no duplicate assumption keys, no
/// impact equal to an assumption, value ranges).
Scenario parse_scenario(std::string_view document,
                        const SynonymTable& synonyms = SynonymTable::builtin());

/// Canonical JSON document (2-space indent, trailing newline). Round-trips
/// through parse_scenario.
std::string serialize_scenario(const Scenario& scenario);

/// Structural checks that need no catalog: list sizes, duplicates, collisions,
/// value ranges. Shared by the parser and validate().
std::vector<Finding> structural_findings(const Scenario& scenario);

/// Coarsest frequency among all assumption and impact keys; every series can
/// be downsampled to it.
Frequency common_frequency(const Scenario& scenario);

/// Impact horizon expressed in periods of `target` (at least 1):
/// ceil(horizon * days(impact frequency) / days(target)).
int horizon_steps(const Impact& impact, Frequency target);

}  // namespace scenvar
