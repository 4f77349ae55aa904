#pragma once

#include "scenvar/catalog.hpp"
#include "scenvar/scenario.hpp"

#include <optional>

namespace scenvar {

struct ValidationOptions {
  ResampleRules resample = ResampleRules::defaults();
  /// Overrides the default lag ceiling used in the history check.
  std::optional<int> max_lag;
  /// Common observations below this count produce a `short-history` warning.
  int recommended_history = 30;
};

/// Completeness and consistency feedback for a scenario against a catalog.
/// Never throws for scenario problems: every problem becomes a finding, in
/// check order (completeness first, then consistency, then history).
///
/// Codes: unknown-series, duplicate-assumption, impact-is-assumption,
/// empty-assumptions, empty-impacts, change-out-of-range, invalid-uncertainty,
/// invalid-horizon, invalid-period, insufficient-history, short-history,
/// period-not-in-future, period-beyond-horizon.
ValidationReport validate(const Scenario& scenario, const Catalog& catalog,
                          const ValidationOptions& options = {});

}  // namespace scenvar
