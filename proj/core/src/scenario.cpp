#include "scenvar/scenario.hpp"

#include "scenvar/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <set>

namespace scenvar {

using nlohmann::json;

std::string_view to_string(ShockShape shape) noexcept {
  return shape == ShockShape::linear_ramp ? "linear_ramp" : "step";
}

bool ValidationReport::valid() const noexcept { return error_count() == 0; }

std::size_t ValidationReport::error_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(
      findings.begin(), findings.end(), [](const Finding& f) { return f.severity == Severity::error; }));
}

bool ValidationReport::has(std::string_view code) const noexcept {
  return std::any_of(findings.begin(), findings.end(), [&](const Finding& f) { return f.code == code; });
}

ScenarioParseError::ScenarioParseError(const std::string& message, std::vector<Finding> findings)
    : std::runtime_error(message), findings_(std::move(findings)) {}

namespace {

Finding error(std::string code, std::string message, std::string path) {
  return {Severity::error, std::move(code), std::move(message), std::move(path)};
}

std::string join(const std::string& base, std::string_view field) {
  return base.empty() ? std::string(field) : base + "." + std::string(field);
}

std::string indexed(std::string_view base, std::size_t i) {
  return std::string(base) + "[" + std::to_string(i) + "]";
}

// Collects findings while walking the document so that every field-level
// problem is reported, not just the first.
class Reader {
 public:
  explicit Reader(const SynonymTable& synonyms) : synonyms_(synonyms) {}

  std::vector<Finding> findings;

  bool expect_object(const json& j, const std::string& path) {
    if (j.is_object()) return true;
    findings.push_back(error("invalid-type", "expected an object", path.empty() ? "$" : path));
    return false;
  }

  void reject_unknown(const json& obj, const std::string& path,
                      std::initializer_list<std::string_view> allowed) {
    for (const auto& [name, value] : obj.items()) {
      if (std::find(allowed.begin(), allowed.end(), name) == allowed.end())
        findings.push_back(error("unknown-field", "unknown field '" + name + "'", join(path, name)));
    }
  }

  const json* field(const json& obj, const std::string& path, std::string_view name, bool required) {
    auto it = obj.find(name);
    if (it == obj.end()) {
      if (required)
        findings.push_back(error("missing-field", "missing required field '" + std::string(name) + "'",
                                 join(path, name)));
      return nullptr;
    }
    return &*it;
  }

  std::optional<std::string> string_field(const json& obj, const std::string& path,
                                          std::string_view name, bool required = true) {
    const json* v = field(obj, path, name, required);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      findings.push_back(error("invalid-type", "expected a string", join(path, name)));
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<double> number_field(const json& obj, const std::string& path, std::string_view name,
                                     bool required = true) {
    const json* v = field(obj, path, name, required);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      findings.push_back(error("invalid-type", "expected a number", join(path, name)));
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<long long> integer_field(const json& obj, const std::string& path,
                                         std::string_view name) {
    const json* v = field(obj, path, name, true);
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) {
      findings.push_back(error("invalid-type", "expected an integer", join(path, name)));
      return std::nullopt;
    }
    return v->get<long long>();
  }

  std::optional<std::string> label(const json& obj, const std::string& path, std::string_view name,
                                   LabelKind kind, bool required = true) {
    auto raw = string_field(obj, path, name, required);
    if (!raw) return std::nullopt;
    try {
      return synonyms_.normalize(*raw, kind);
    } catch (const LabelError& e) {
      findings.push_back(error("invalid-value", e.what(), join(path, name)));
      return std::nullopt;
    }
  }

  std::optional<Date> date(const json& obj, const std::string& path, std::string_view name) {
    auto raw = string_field(obj, path, name);
    if (!raw) return std::nullopt;
    auto d = parse_date(*raw);
    if (!d) findings.push_back(error("invalid-value", "expected an ISO-8601 date (YYYY-MM-DD)", join(path, name)));
    return d;
  }

  std::optional<SeriesKey> key(const json& obj, const std::string& path) {
    auto metric = label(obj, path, "metric", LabelKind::metric);
    auto item = label(obj, path, "item", LabelKind::item);
    auto region = label(obj, path, "region", LabelKind::region);
    std::optional<std::string> secondary;
    if (auto it = obj.find("secondary_region"); it != obj.end() && !it->is_null())
      secondary = label(obj, path, "secondary_region", LabelKind::region);
    std::optional<Frequency> freq;
    if (auto token = string_field(obj, path, "frequency")) {
      freq = parse_frequency(*token);
      if (!freq)
        findings.push_back(error("invalid-value",
                                 "frequency must be one of annual, monthly, weekly, daily",
                                 join(path, "frequency")));
    }
    if (!metric || !item || !region || !freq) return std::nullopt;
    return SeriesKey{*metric, *item, *region, secondary, *freq};
  }

 private:
  const SynonymTable& synonyms_;
};

std::optional<Assumption> read_assumption(Reader& r, const json& j, const std::string& path) {
  if (!r.expect_object(j, path)) return std::nullopt;
  r.reject_unknown(j, path,
                   {"metric", "item", "region", "secondary_region", "frequency", "change_pct", "period",
                    "shock_shape", "uncertainty_std_pct"});
  const auto before = r.findings.size();
  Assumption a;
  auto key = r.key(j, path);
  auto change = r.number_field(j, path, "change_pct");
  if (const json* period = r.field(j, path, "period", true)) {
    const auto ppath = join(path, "period");
    if (r.expect_object(*period, ppath)) {
      r.reject_unknown(*period, ppath, {"start", "end"});
      auto start = r.date(*period, ppath, "start");
      auto end = r.date(*period, ppath, "end");
      if (start && end) a.period = {*start, *end};
    }
  }
  if (auto shape = r.string_field(j, path, "shock_shape", false)) {
    if (*shape == "step")
      a.shock_shape = ShockShape::step;
    else if (*shape == "linear_ramp")
      a.shock_shape = ShockShape::linear_ramp;
    else
      r.findings.push_back(error("invalid-value", "shock_shape must be 'step' or 'linear_ramp'",
                                 join(path, "shock_shape")));
  }
  if (const json* std_pct = r.field(j, path, "uncertainty_std_pct", false); std_pct && !std_pct->is_null())
    a.uncertainty_std_pct = r.number_field(j, path, "uncertainty_std_pct");
  if (r.findings.size() != before || !key || !change) return std::nullopt;
  a.key = *key;
  a.change_pct = *change;
  return a;
}

std::optional<Impact> read_impact(Reader& r, const json& j, const std::string& path) {
  if (!r.expect_object(j, path)) return std::nullopt;
  r.reject_unknown(j, path, {"metric", "item", "region", "secondary_region", "frequency", "horizon"});
  const auto before = r.findings.size();
  auto key = r.key(j, path);
  auto horizon = r.integer_field(j, path, "horizon");
  if (horizon && (*horizon < 1 || *horizon > 1'000'000)) {
    r.findings.push_back(error("invalid-horizon", "horizon must be a positive integer", join(path, "horizon")));
  }
  if (r.findings.size() != before || !key || !horizon) return std::nullopt;
  return Impact{*key, static_cast<int>(*horizon)};
}

void key_to_json(nlohmann::ordered_json& j, const SeriesKey& key) {
  j["metric"] = key.metric;
  j["item"] = key.item;
  j["region"] = key.region;
  if (key.secondary_region) j["secondary_region"] = *key.secondary_region;
  j["frequency"] = to_string(key.frequency);
}

}  // namespace

std::vector<Finding> structural_findings(const Scenario& s) {
  std::vector<Finding> out;
  if (s.id.empty()) out.push_back(error("invalid-value", "id must be non-empty", "id"));
  if (s.assumptions.empty())
    out.push_back(error("empty-assumptions", "assumptions must be non-empty", "assumptions"));
  if (s.impacts.empty()) out.push_back(error("empty-impacts", "impacts must be non-empty", "impacts"));

  for (std::size_t i = 0; i < s.assumptions.size(); ++i) {
    const auto& a = s.assumptions[i];
    const auto path = indexed("assumptions", i);
    if (!std::isfinite(a.change_pct) || a.change_pct < -100.0)
      out.push_back(error("change-out-of-range", "change_pct must be a finite number >= -100",
                          path + ".change_pct"));
    if (a.uncertainty_std_pct &&
        (!std::isfinite(*a.uncertainty_std_pct) || *a.uncertainty_std_pct < 0.0))
      out.push_back(error("invalid-uncertainty", "uncertainty_std_pct must be >= 0",
                          path + ".uncertainty_std_pct"));
    if (a.period.empty())
      out.push_back(error("invalid-period", "period end precedes period start", path + ".period"));
    for (std::size_t j = 0; j < i; ++j) {
      if (s.assumptions[j].key == a.key) {
        out.push_back(error("duplicate-assumption",
                            "another assumption (" + indexed("assumptions", j) + ") already targets " +
                                to_string(a.key),
                            path));
        break;
      }
    }
  }
  for (std::size_t i = 0; i < s.impacts.size(); ++i) {
    const auto& imp = s.impacts[i];
    const auto path = indexed("impacts", i);
    if (imp.horizon < 1)
      out.push_back(error("invalid-horizon", "horizon must be a positive integer", path + ".horizon"));
    for (std::size_t j = 0; j < s.assumptions.size(); ++j) {
      if (s.assumptions[j].key == imp.key) {
        out.push_back(error("impact-is-assumption",
                            to_string(imp.key) + " is also assumption " + indexed("assumptions", j), path));
        break;
      }
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (s.impacts[j].key == imp.key) {
        out.push_back({Severity::warning, "duplicate-impact",
                       to_string(imp.key) + " is already listed as " + indexed("impacts", j), path});
        break;
      }
    }
  }
  return out;
}

Scenario parse_scenario(std::string_view document, const SynonymTable& synonyms) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw ScenarioParseError("scenario is not valid JSON",
                             {error("syntax-error", e.what(), "$")});
  }

  Reader r(synonyms);
  Scenario s;
  if (r.expect_object(doc, "")) {
    r.reject_unknown(doc, "", {"id", "name", "assumptions", "impacts"});
    if (auto id = r.string_field(doc, "", "id")) s.id = *id;
    if (auto name = r.string_field(doc, "", "name")) s.name = *name;
    for (auto [field, is_assumptions] : {std::pair{"assumptions", true}, std::pair{"impacts", false}}) {
      const json* list = r.field(doc, "", field, true);
      if (!list) continue;
      if (!list->is_array()) {
        r.findings.push_back(error("invalid-type", "expected an array", field));
        continue;
      }
      for (std::size_t i = 0; i < list->size(); ++i) {
        const auto path = indexed(field, i);
        if (is_assumptions) {
          if (auto a = read_assumption(r, (*list)[i], path)) s.assumptions.push_back(std::move(*a));
        } else if (auto imp = read_impact(r, (*list)[i], path)) {
          s.impacts.push_back(std::move(*imp));
        }
      }
    }
  }

  auto findings = std::move(r.findings);
  if (findings.empty()) {
    for (auto& f : structural_findings(s))
      if (f.severity == Severity::error) findings.push_back(std::move(f));
  }
  if (!findings.empty()) {
    std::string message = "invalid scenario: " + findings.front().path + ": " + findings.front().message;
    if (findings.size() > 1) message += " (and " + std::to_string(findings.size() - 1) + " more)";
    throw ScenarioParseError(message, std::move(findings));
  }
  return s;
}

std::string serialize_scenario(const Scenario& s) {
  nlohmann::ordered_json doc;
  doc["id"] = s.id;
  doc["name"] = s.name;
  doc["assumptions"] = nlohmann::ordered_json::array();
  for (const auto& a : s.assumptions) {
    nlohmann::ordered_json j;
    key_to_json(j, a.key);
    j["change_pct"] = a.change_pct;
    j["period"] = {{"start", format_date(a.period.start)}, {"end", format_date(a.period.end)}};
    j["shock_shape"] = to_string(a.shock_shape);
    if (a.uncertainty_std_pct) j["uncertainty_std_pct"] = *a.uncertainty_std_pct;
    doc["assumptions"].push_back(std::move(j));
  }
  doc["impacts"] = nlohmann::ordered_json::array();
  for (const auto& imp : s.impacts) {
    nlohmann::ordered_json j;
    key_to_json(j, imp.key);
    j["horizon"] = imp.horizon;
    doc["impacts"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

Frequency common_frequency(const Scenario& s) {
  Frequency f = Frequency::daily;
  for (const auto& a : s.assumptions) f = std::max(f, a.key.frequency);
  for (const auto& imp : s.impacts) f = std::max(f, imp.key.frequency);
  return f;
}

int horizon_steps(const Impact& impact, Frequency target) {
  const double ratio = nominal_days(impact.key.frequency) / nominal_days(target);
  const double steps = std::ceil(static_cast<double>(impact.horizon) * ratio - 1e-9);
  return std::max(1, static_cast<int>(steps));
}

}  // namespace scenvar
