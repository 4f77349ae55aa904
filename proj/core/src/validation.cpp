#include "scenvar/validation.hpp"

#include "scenvar/error.hpp"
#include "scenvar/var.hpp"

#include <algorithm>

namespace scenvar {

namespace {

std::string indexed(std::string_view base, std::size_t i) {
  return std::string(base) + "[" + std::to_string(i) + "]";
}

}  // namespace

ValidationReport validate(const Scenario& scenario, const Catalog& catalog,
                          const ValidationOptions& options) {
  ValidationReport report;
  auto& out = report.findings;

  // Completeness.
  bool all_resolved = true;
  auto resolve = [&](const SeriesKey& key, const std::string& path) {
    if (catalog.contains(key)) return;
    all_resolved = false;
    out.push_back({Severity::error, "unknown-series", to_string(key) + " is not in the catalog", path});
  };
  for (std::size_t i = 0; i < scenario.assumptions.size(); ++i)
    resolve(scenario.assumptions[i].key, indexed("assumptions", i));
  for (std::size_t i = 0; i < scenario.impacts.size(); ++i)
    resolve(scenario.impacts[i].key, indexed("impacts", i));

  // Consistency.
  const auto structural = structural_findings(scenario);
  out.insert(out.end(), structural.begin(), structural.end());
  const bool structurally_sound =
      std::none_of(structural.begin(), structural.end(),
                   [](const Finding& f) { return f.severity == Severity::error; });
  if (!all_resolved || !structurally_sound) return report;

  // History.
  const Frequency freq = common_frequency(scenario);
  std::vector<SeriesKey> keys;
  for (const auto& a : scenario.assumptions) keys.push_back(a.key);
  for (const auto& imp : scenario.impacts)
    if (std::find(keys.begin(), keys.end(), imp.key) == keys.end()) keys.push_back(imp.key);

  AlignedData aligned;
  try {
    aligned = catalog.align(keys, freq, DateRange::unbounded(), options.resample);
  } catch (const Error& e) {
    out.push_back({Severity::error, "alignment-error", e.what(), ""});
    return report;
  }
  const auto T = aligned.rows();
  const auto k = static_cast<Eigen::Index>(keys.size());
  const int p_max = options.max_lag.value_or(var::default_max_lag(T, k));
  if (p_max < 1 || T < p_max + 10) {
    out.push_back({Severity::error, "insufficient-history",
                   std::to_string(T) + " common " + std::string(to_string(freq)) +
                       " observations across " + std::to_string(k) + " series; need at least " +
                       std::to_string(std::max(p_max, 1) + 10) + " with lag ceiling " +
                       std::to_string(std::max(p_max, 1)),
                   ""});
  } else if (T < options.recommended_history) {
    out.push_back({Severity::warning, "short-history",
                   std::to_string(T) + " common observations; estimates may be unreliable below " +
                       std::to_string(options.recommended_history),
                   ""});
  }
  if (T == 0) return report;

  const auto origin = period_index(aligned.index.back(), freq);
  int max_steps = 0;
  for (const auto& imp : scenario.impacts) max_steps = std::max(max_steps, horizon_steps(imp, freq));
  for (std::size_t i = 0; i < scenario.assumptions.size(); ++i) {
    const auto& a = scenario.assumptions[i];
    const auto start = period_index(a.period.start, freq);
    if (start <= origin) {
      out.push_back({Severity::error, "period-not-in-future",
                     "assumption period starts " + format_date(a.period.start) +
                         ", not after the forecast origin " + format_date(aligned.index.back()),
                     indexed("assumptions", i) + ".period.start"});
    } else if (start > origin + max_steps) {
      out.push_back({Severity::warning, "period-beyond-horizon",
                     "assumption period starts after the last forecast step",
                     indexed("assumptions", i) + ".period.start"});
    }
  }
  return report;
}

}  // namespace scenvar
