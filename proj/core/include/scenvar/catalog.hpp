#pragma once

#include "scenvar/calendar.hpp"
#include "scenvar/cleaning.hpp"
#include "scenvar/csv.hpp"
#include "scenvar/labels.hpp"
#include "scenvar/series.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

namespace scenvar {

/// Column contract of the ingestion CSV.
inline constexpr std::string_view kCsvHeader =
    "metric,item,region,secondary_region,frequency,timestamp,value,unit,source";

struct RowRejection {
  std::size_t line = 0;  // 1-based physical line of the record start
  std::string reason;    // parse-error | duplicate-timestamp | unknown-frequency | ...
  std::string message;
};

struct IngestSummary {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t series_created = 0;
  std::vector<RowRejection> rejections;

  std::size_t rejected_for(std::string_view reason) const;
};

enum class Aggregation { mean, sum };

/// How a metric is aggregated when downsampling. Metrics not listed use
/// `fallback`.
struct ResampleRules {
  Aggregation fallback = Aggregation::mean;
  std::map<std::string, Aggregation, std::less<>> per_metric;

  /// Mean everywhere except flow volumes (production, consumption, import,
  /// export), which are summed.
  static ResampleRules defaults();
  Aggregation for_metric(std::string_view metric) const;
};

/// Observation matrix produced by Catalog::align: one row per shared period,
/// one column per requested key (in request order).
struct AlignedData {
  Frequency frequency = Frequency::annual;
  std::vector<Date> index;
  std::vector<SeriesKey> keys;
  Eigen::MatrixXd values;

  Eigen::Index rows() const noexcept { return values.rows(); }
  Eigen::Index cols() const noexcept { return values.cols(); }
};

/// Resamples one series onto `target`, which must be at least as coarse as
/// the series' own frequency. Non-finite points are ignored.
std::vector<Observation> resample(const TimeSeries& series, Frequency target,
                                  Aggregation aggregation);

/// In-memory series catalog with a flat on-disk layout (`index.json` plus one
/// `series/NNNNNN.csv` per series).
///
/// Reads may run concurrently; ingest/clean/put take an exclusive lock. Copying
/// a catalog takes a consistent snapshot under the source's shared lock.
class Catalog {
 public:
  explicit Catalog(SynonymTable synonyms = SynonymTable::builtin());
  Catalog(const Catalog& other);
  Catalog& operator=(const Catalog& other);
  Catalog(Catalog&&) = delete;
  Catalog& operator=(Catalog&&) = delete;
  ~Catalog() = default;

  /// Appends every well-formed row. Fatal problems (bad header, invalid UTF-8)
  /// throw FormatError and leave the catalog untouched.
  IngestSummary ingest_csv(std::istream& source, const CsvDialect& dialect = {});

  /// Cleans every series in place and stores the per-series reports.
  CleaningReport clean_all(const CleaningPolicy& policy = {});

  /// Inserts or replaces a series.
  void put(TimeSeries series);

  std::vector<SeriesKey> query(const KeyFilter& filter = {}) const;
  std::optional<TimeSeries> find(const SeriesKey& key) const;
  std::optional<CleaningReport> cleaning_report(const SeriesKey& key) const;
  bool contains(const SeriesKey& key) const;
  std::size_t size() const;

  AlignedData align(std::span<const SeriesKey> keys, Frequency frequency,
                    const DateRange& window = DateRange::unbounded(),
                    const ResampleRules& rules = ResampleRules::defaults()) const;

  const SynonymTable& synonyms() const noexcept { return synonyms_; }

  void save(const std::filesystem::path& directory) const;
  /// Replaces the contents with a catalog saved by save(). A directory without
  /// an index leaves the catalog empty; a corrupt index throws FormatError.
  void load(const std::filesystem::path& directory);

 private:
  SynonymTable synonyms_;
  mutable std::shared_mutex mutex_;
  std::map<SeriesKey, TimeSeries> series_;
  std::map<SeriesKey, CleaningReport> reports_;
};

}  // namespace scenvar
