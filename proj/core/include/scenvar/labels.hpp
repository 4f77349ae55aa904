#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>

namespace scenvar {

enum class LabelKind { metric, item, region };

std::string_view to_string(LabelKind kind) noexcept;

/// Trim, lowercase (ASCII and Cyrillic/Latin-1 via UTF-8 aware folding of the
/// common two-byte ranges), and collapse internal runs of whitespace into a
/// single space. Throws LabelError when nothing remains.
std::string canonicalize(std::string_view raw);

/// Exact-match terminology table mapping raw labels to canonical ones, one
/// table per label kind. Keys and values are stored canonicalized.
class SynonymTable {
 public:
  SynonymTable() = default;

  /// Parses lines of `kind,raw,canonical`; blank lines and `#` comments are
  /// ignored. Throws FormatError on malformed lines or on chains (a canonical
  /// value that is itself mapped elsewhere), which would break idempotence.
  static SynonymTable parse(std::string_view text);
  static SynonymTable load(const std::filesystem::path& path);

  /// The table shipped in core/data/synonyms.txt.
  static const SynonymTable& builtin();

  /// Throws FormatError if the entry would create a chain.
  void add(LabelKind kind, std::string_view raw, std::string_view canonical);

  /// Canonicalizes `raw` and applies the table; unmapped labels pass through.
  std::string normalize(std::string_view raw, LabelKind kind) const;

  std::size_t size() const noexcept;
  std::string to_text() const;

 private:
  void check_no_chain() const;

  std::map<std::pair<LabelKind, std::string>, std::string> entries_;
};

/// Convenience wrapper over the built-in table.
inline std::string normalize_label(std::string_view raw, LabelKind kind,
                                   const SynonymTable& table = SynonymTable::builtin()) {
  return table.normalize(raw, kind);
}

std::string_view default_synonym_text();

}  // namespace scenvar
