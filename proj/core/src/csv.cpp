#include "scenvar/csv.hpp"

namespace scenvar {

std::optional<std::vector<std::string>> split_csv_record(std::string_view line,
                                                          const CsvDialect& dialect) {
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == dialect.quote) {
        if (i + 1 < line.size() && line[i + 1] == dialect.quote) {
          field.push_back(c);
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == dialect.quote) {
      in_quotes = true;
    } else if (c == dialect.delimiter) {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (in_quotes) return std::nullopt;
  fields.push_back(std::move(field));
  return fields;
}

bool read_csv_record(std::istream& in, std::string& record, const CsvDialect& dialect) {
  record.clear();
  std::string line;
  bool any = false;
  bool in_quotes = false;
  while (std::getline(in, line)) {
    any = true;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    for (char c : line)
      if (c == dialect.quote) in_quotes = !in_quotes;
    record += line;
    if (!in_quotes) return true;
    record.push_back('\n');
  }
  return any;
}

std::string quote_csv_field(std::string_view field, const CsvDialect& dialect) {
  const bool needs = field.find_first_of(std::string{dialect.delimiter, dialect.quote, '\n', '\r'}) !=
                     std::string_view::npos;
  if (!needs) return std::string(field);
  std::string out(1, dialect.quote);
  for (char c : field) {
    if (c == dialect.quote) out.push_back(c);
    out.push_back(c);
  }
  out.push_back(dialect.quote);
  return out;
}

bool is_valid_utf8(std::string_view text) noexcept {
  std::size_t i = 0;
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      ++i;
      continue;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      return false;
    }
    if (i + len > text.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (b & 0x3F);
    }
    // Overlong encodings, surrogates and out-of-range code points.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF)
      return false;
    i += len;
  }
  return true;
}

}  // namespace scenvar
