#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scenvar {

struct CsvDialect {
  char delimiter = ',';
  char quote = '"';
};

/// Splits one record into fields (RFC 4180 quoting, `""` escapes). Returns
/// nullopt on an unterminated quote.
std::optional<std::vector<std::string>> split_csv_record(std::string_view line,
                                                          const CsvDialect& dialect = {});

/// Reads one logical record (quoted fields may span lines). Returns false at
/// end of input.
bool read_csv_record(std::istream& in, std::string& record, const CsvDialect& dialect = {});

std::string quote_csv_field(std::string_view field, const CsvDialect& dialect = {});

bool is_valid_utf8(std::string_view text) noexcept;

}  // namespace scenvar
