#include "scenvar/catalog.hpp"

#include "scenvar/error.hpp"
#include "scenvar/json_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>

namespace scenvar {

namespace {

constexpr std::string_view kColumns[] = {"metric", "item",  "region", "secondary_region", "frequency",
                                         "timestamp", "value", "unit",   "source"};
constexpr std::size_t kColumnCount = std::size(kColumns);

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

enum class ValueParse { ok, missing, bad };

ValueParse parse_value(std::string_view text, double& out) {
  text = trim(text);
  const auto low = lower_ascii(text);
  if (low.empty() || low == "na" || low == "nan") {
    out = std::numeric_limits<double>::quiet_NaN();
    return ValueParse::missing;
  }
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(out))
    return ValueParse::bad;
  return ValueParse::ok;
}

void check_header(const std::vector<std::string>& fields) {
  std::vector<std::string> got;
  for (const auto& f : fields) got.push_back(lower_ascii(trim(f)));
  for (auto col : kColumns)
    if (std::find(got.begin(), got.end(), col) == got.end())
      throw FormatError("missing required column '" + std::string(col) + "'");
  bool exact = got.size() == kColumnCount;
  for (std::size_t i = 0; exact && i < kColumnCount; ++i) exact = got[i] == kColumns[i];
  if (!exact) throw FormatError("header must be exactly: " + std::string(kCsvHeader));
}

struct StagedRow {
  SeriesKey key;
  Observation obs;
  std::string unit;
  std::string source;
};

}  // namespace

std::size_t IngestSummary::rejected_for(std::string_view reason) const {
  return static_cast<std::size_t>(std::count_if(
      rejections.begin(), rejections.end(), [&](const RowRejection& r) { return r.reason == reason; }));
}

ResampleRules ResampleRules::defaults() {
  ResampleRules rules;
  for (auto metric : {"production", "consumption", "import", "export"})
    rules.per_metric.emplace(metric, Aggregation::sum);
  return rules;
}

Aggregation ResampleRules::for_metric(std::string_view metric) const {
  if (auto it = per_metric.find(metric); it != per_metric.end()) return it->second;
  return fallback;
}

std::vector<Observation> resample(const TimeSeries& series, Frequency target,
                                  Aggregation aggregation) {
  if (target < series.key.frequency)
    throw AlignmentError(to_string(series.key) + ": cannot resample to finer frequency " +
                         std::string(to_string(target)));
  std::map<std::int64_t, std::pair<double, std::size_t>> buckets;
  for (const auto& pt : series.points) {
    if (!std::isfinite(pt.value)) continue;
    auto& [sum, count] = buckets[period_index(pt.date, target)];
    sum += pt.value;
    ++count;
  }
  std::vector<Observation> out;
  out.reserve(buckets.size());
  for (const auto& [idx, acc] : buckets) {
    const double v = aggregation == Aggregation::sum ? acc.first
                                                     : acc.first / static_cast<double>(acc.second);
    out.push_back({period_start(idx, target), v});
  }
  return out;
}

Catalog::Catalog(SynonymTable synonyms) : synonyms_(std::move(synonyms)) {}

Catalog::Catalog(const Catalog& other) : synonyms_(other.synonyms_) {
  std::shared_lock lock(other.mutex_);
  series_ = other.series_;
  reports_ = other.reports_;
}

Catalog& Catalog::operator=(const Catalog& other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mutex_);
  std::shared_lock other_lock(other.mutex_);
  synonyms_ = other.synonyms_;
  series_ = other.series_;
  reports_ = other.reports_;
  return *this;
}

IngestSummary Catalog::ingest_csv(std::istream& source, const CsvDialect& dialect) {
  std::ostringstream buffer;
  buffer << source.rdbuf();
  std::string text = buffer.str();
  if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);
  if (!is_valid_utf8(text)) throw FormatError("input is not valid UTF-8");

  std::istringstream in(text);
  std::string record;
  std::size_t line = 1;
  if (!read_csv_record(in, record, dialect)) throw FormatError("input is empty; header required");
  auto header = split_csv_record(record, dialect);
  if (!header) throw FormatError("unterminated quote in header");
  check_header(*header);
  line += static_cast<std::size_t>(std::count(record.begin(), record.end(), '\n')) + 1;

  std::unique_lock lock(mutex_);

  IngestSummary summary;
  std::vector<StagedRow> staged;
  std::set<std::pair<SeriesKey, Date>> seen;
  std::map<SeriesKey, std::string> staged_units;
  auto reject = [&](std::size_t at, std::string reason, std::string message) {
    ++summary.rejected;
    summary.rejections.push_back({at, std::move(reason), std::move(message)});
  };

  while (read_csv_record(in, record, dialect)) {
    const std::size_t at = line;
    line += static_cast<std::size_t>(std::count(record.begin(), record.end(), '\n')) + 1;
    if (trim(record).empty()) continue;

    auto fields = split_csv_record(record, dialect);
    if (!fields) {
      reject(at, "parse-error", "unterminated quoted field");
      continue;
    }
    if (fields->size() != kColumnCount) {
      reject(at, "field-count",
             "expected " + std::to_string(kColumnCount) + " fields, got " +
                 std::to_string(fields->size()));
      continue;
    }
    const auto& f = *fields;

    SeriesKey key;
    try {
      key.metric = synonyms_.normalize(f[0], LabelKind::metric);
      key.item = synonyms_.normalize(f[1], LabelKind::item);
      key.region = synonyms_.normalize(f[2], LabelKind::region);
      if (!trim(f[3]).empty()) key.secondary_region = synonyms_.normalize(f[3], LabelKind::region);
    } catch (const LabelError& e) {
      reject(at, "invalid-label", e.what());
      continue;
    }
    const auto freq = parse_frequency(lower_ascii(trim(f[4])));
    if (!freq) {
      reject(at, "unknown-frequency", "unknown frequency '" + std::string(trim(f[4])) + "'");
      continue;
    }
    key.frequency = *freq;
    const auto date = parse_date(trim(f[5]));
    if (!date) {
      reject(at, "parse-error", "unparseable timestamp '" + std::string(trim(f[5])) + "'");
      continue;
    }
    double value = 0.0;
    if (parse_value(f[6], value) == ValueParse::bad) {
      reject(at, "parse-error", "unparseable value '" + std::string(trim(f[6])) + "'");
      continue;
    }
    const Date snapped = snap_to_period(*date, key.frequency);
    std::string unit(trim(f[7]));

    const auto existing = series_.find(key);
    if (existing != series_.end() && existing->second.log_scale) {
      reject(at, "log-scale-series", to_string(key) + " is stored on a log scale");
      continue;
    }
    bool dup_existing = false;
    if (existing != series_.end()) {
      const auto& pts = existing->second.points;
      auto pos = std::lower_bound(pts.begin(), pts.end(), snapped,
                                  [](const Observation& o, Date d) { return o.date < d; });
      dup_existing = pos != pts.end() && pos->date == snapped;
    }
    if (dup_existing || seen.contains({key, snapped})) {
      reject(at, "duplicate-timestamp",
             to_string(key) + " already has a value for " + format_date(snapped));
      continue;
    }
    const std::string* known_unit = nullptr;
    if (existing != series_.end() && !existing->second.points.empty())
      known_unit = &existing->second.unit;
    else if (auto it = staged_units.find(key); it != staged_units.end())
      known_unit = &it->second;
    if (known_unit && *known_unit != unit) {
      reject(at, "unit-mismatch",
             to_string(key) + " uses unit '" + *known_unit + "', row has '" + unit + "'");
      continue;
    }
    staged_units.emplace(key, unit);
    seen.insert({key, snapped});
    staged.push_back({std::move(key), {snapped, value}, std::move(unit), std::string(trim(f[8]))});
  }

  std::set<SeriesKey> touched;
  for (auto& row : staged) {
    auto [it, created] = series_.try_emplace(row.key);
    auto& series = it->second;
    if (created) {
      series.key = row.key;
      series.unit = row.unit;
      series.source = row.source;
      ++summary.series_created;
    } else if (series.points.empty()) {
      series.unit = row.unit;
    }
    series.points.push_back(row.obs);
    series.cleaned_with.reset();
    touched.insert(row.key);
    ++summary.accepted;
  }
  for (const auto& key : touched) {
    auto& pts = series_[key].points;
    std::stable_sort(pts.begin(), pts.end(),
                     [](const Observation& a, const Observation& b) { return a.date < b.date; });
  }
  return summary;
}

CleaningReport Catalog::clean_all(const CleaningPolicy& policy) {
  std::unique_lock lock(mutex_);
  std::map<SeriesKey, CleanResult> results;
  for (const auto& [key, series] : series_) {
    if (series.cleaned_with && *series.cleaned_with == policy) continue;
    results.emplace(key, clean_series(series, policy));
  }
  CleaningReport total;
  for (auto& [key, result] : results) {
    total += result.report;
    reports_[key] = result.report;
    series_[key] = std::move(result.series);
  }
  return total;
}

void Catalog::put(TimeSeries series) {
  std::unique_lock lock(mutex_);
  auto key = series.key;
  reports_.erase(key);
  series_.insert_or_assign(std::move(key), std::move(series));
}

std::vector<SeriesKey> Catalog::query(const KeyFilter& filter) const {
  std::shared_lock lock(mutex_);
  std::vector<SeriesKey> keys;
  for (const auto& [key, series] : series_)
    if (filter.matches(key)) keys.push_back(key);
  return keys;
}

std::optional<TimeSeries> Catalog::find(const SeriesKey& key) const {
  std::shared_lock lock(mutex_);
  if (auto it = series_.find(key); it != series_.end()) return it->second;
  return std::nullopt;
}

std::optional<CleaningReport> Catalog::cleaning_report(const SeriesKey& key) const {
  std::shared_lock lock(mutex_);
  if (auto it = reports_.find(key); it != reports_.end()) return it->second;
  return std::nullopt;
}

bool Catalog::contains(const SeriesKey& key) const {
  std::shared_lock lock(mutex_);
  return series_.contains(key);
}

std::size_t Catalog::size() const {
  std::shared_lock lock(mutex_);
  return series_.size();
}

AlignedData Catalog::align(std::span<const SeriesKey> keys, Frequency frequency,
                           const DateRange& window, const ResampleRules& rules) const {
  if (keys.empty()) throw AlignmentError("no series requested");
  std::shared_lock lock(mutex_);

  std::vector<std::map<Date, double>> columns;
  columns.reserve(keys.size());
  for (const auto& key : keys) {
    auto it = series_.find(key);
    if (it == series_.end()) throw AlignmentError("unresolvable series " + to_string(key));
    std::map<Date, double> column;
    for (const auto& obs : resample(it->second, frequency, rules.for_metric(key.metric)))
      if (window.contains(obs.date)) column.emplace(obs.date, obs.value);
    columns.push_back(std::move(column));
  }

  AlignedData out;
  out.frequency = frequency;
  out.keys.assign(keys.begin(), keys.end());
  for (const auto& [date, value] : columns.front()) {
    const bool everywhere = std::all_of(columns.begin() + 1, columns.end(),
                                        [&](const auto& c) { return c.contains(date); });
    if (everywhere) out.index.push_back(date);
  }
  out.values.resize(static_cast<Eigen::Index>(out.index.size()),
                    static_cast<Eigen::Index>(keys.size()));
  for (Eigen::Index r = 0; r < out.values.rows(); ++r)
    for (Eigen::Index c = 0; c < out.values.cols(); ++c)
      out.values(r, c) = columns[static_cast<std::size_t>(c)].at(out.index[static_cast<std::size_t>(r)]);
  return out;
}

void Catalog::save(const std::filesystem::path& directory) const {
  namespace fs = std::filesystem;
  std::shared_lock lock(mutex_);
  fs::create_directories(directory);
  const auto staging = directory / "series.tmp";
  fs::remove_all(staging);
  fs::create_directories(staging);

  nlohmann::json index;
  index["format"] = "scenvar-catalog";
  index["version"] = 1;
  index["series"] = nlohmann::json::array();
  std::size_t n = 0;
  for (const auto& [key, series] : series_) {
    char name[32];
    std::snprintf(name, sizeof name, "%06zu.csv", ++n);
    std::ofstream out(staging / name, std::ios::binary);
    out << "timestamp,value\n";
    for (const auto& pt : series.points) out << format_date(pt.date) << ',' << format_double(pt.value) << '\n';
    if (!out) throw FormatError("failed to write " + (staging / name).string());

    nlohmann::json entry;
    entry["key"] = key;
    entry["file"] = std::string("series/") + name;
    entry["unit"] = series.unit;
    entry["source"] = series.source;
    entry["log_scale"] = series.log_scale;
    entry["cleaned_with"] = series.cleaned_with ? nlohmann::json(*series.cleaned_with) : nlohmann::json();
    if (auto it = reports_.find(key); it != reports_.end()) entry["cleaning_report"] = it->second;
    index["series"].push_back(std::move(entry));
  }

  const auto index_tmp = directory / "index.json.tmp";
  {
    std::ofstream out(index_tmp, std::ios::binary);
    out << index.dump(2) << '\n';
    if (!out) throw FormatError("failed to write " + index_tmp.string());
  }
  fs::remove_all(directory / "series");
  fs::rename(staging, directory / "series");
  fs::rename(index_tmp, directory / "index.json");
}

void Catalog::load(const std::filesystem::path& directory) {
  namespace fs = std::filesystem;
  std::map<SeriesKey, TimeSeries> loaded;
  std::map<SeriesKey, CleaningReport> reports;
  const auto index_path = directory / "index.json";
  if (fs::exists(index_path)) {
    try {
      std::ifstream in(index_path, std::ios::binary);
      const auto index = nlohmann::json::parse(in);
      for (const auto& entry : index.at("series")) {
        TimeSeries series;
        series.key = entry.at("key").get<SeriesKey>();
        series.unit = entry.at("unit").get<std::string>();
        series.source = entry.at("source").get<std::string>();
        series.log_scale = entry.value("log_scale", false);
        if (entry.contains("cleaned_with") && !entry["cleaned_with"].is_null())
          series.cleaned_with = entry["cleaned_with"].get<CleaningPolicy>();
        std::ifstream data(directory / entry.at("file").get<std::string>(), std::ios::binary);
        if (!data) throw FormatError("missing series file " + entry.at("file").get<std::string>());
        std::string row;
        std::getline(data, row);
        while (std::getline(data, row)) {
          if (!row.empty() && row.back() == '\r') row.pop_back();
          if (row.empty()) continue;
          const auto comma = row.find(',');
          const auto date = parse_date(std::string_view(row).substr(0, comma));
          double value = 0.0;
          if (comma == std::string::npos || !date ||
              parse_value(std::string_view(row).substr(comma + 1), value) == ValueParse::bad)
            throw FormatError("corrupt row '" + row + "' in " + entry.at("file").get<std::string>());
          series.points.push_back({*date, value});
        }
        if (entry.contains("cleaning_report"))
          reports[series.key] = entry["cleaning_report"].get<CleaningReport>();
        auto key = series.key;
        loaded.emplace(std::move(key), std::move(series));
      }
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("corrupt catalog index " + index_path.string() + ": " + e.what());
    }
  }
  std::unique_lock lock(mutex_);
  series_ = std::move(loaded);
  reports_ = std::move(reports);
}

}  // namespace scenvar
