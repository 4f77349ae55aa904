#include "scenvar/labels.hpp"

#include "scenvar/csv.hpp"
#include "scenvar/error.hpp"

#include <fstream>
#include <sstream>

namespace scenvar {

namespace {

bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Simple case folding for the scripts that show up in commodity and country
// names: ASCII, Latin-1 supplement, Greek and Cyrillic.
char32_t fold(char32_t cp) noexcept {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  return cp;
}

// Decodes one code point starting at `i`; invalid bytes are passed through
// as themselves.
char32_t decode(std::string_view s, std::size_t& i) noexcept {
  const auto b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) -> int {
    if (i + k >= s.size()) return -1;
    const auto b = static_cast<unsigned char>(s[i + k]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  if ((b0 & 0xE0) == 0xC0) {
    const int c1 = cont(1);
    if (c1 >= 0) {
      i += 2;
      return (static_cast<char32_t>(b0 & 0x1F) << 6) | static_cast<char32_t>(c1);
    }
  } else if ((b0 & 0xF0) == 0xE0) {
    const int c1 = cont(1), c2 = cont(2);
    if (c1 >= 0 && c2 >= 0) {
      i += 3;
      return (static_cast<char32_t>(b0 & 0x0F) << 12) | (static_cast<char32_t>(c1) << 6) |
             static_cast<char32_t>(c2);
    }
  } else if ((b0 & 0xF8) == 0xF0) {
    const int c1 = cont(1), c2 = cont(2), c3 = cont(3);
    if (c1 >= 0 && c2 >= 0 && c3 >= 0) {
      i += 4;
      return (static_cast<char32_t>(b0 & 0x07) << 18) | (static_cast<char32_t>(c1) << 12) |
             (static_cast<char32_t>(c2) << 6) | static_cast<char32_t>(c3);
    }
  }
  ++i;
  return b0;
}

std::optional<LabelKind> parse_kind(std::string_view s) {
  if (s == "metric") return LabelKind::metric;
  if (s == "item") return LabelKind::item;
  if (s == "region") return LabelKind::region;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(LabelKind kind) noexcept {
  switch (kind) {
    case LabelKind::metric: return "metric";
    case LabelKind::item: return "item";
    case LabelKind::region: return "region";
  }
  return "metric";
}

std::string canonicalize(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  std::size_t i = 0;
  while (i < raw.size()) {
    if (is_space(raw[i])) {
      pending_space = !out.empty();
      ++i;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    append_utf8(out, fold(decode(raw, i)));
  }
  if (out.empty()) throw LabelError("label is empty or whitespace-only");
  return out;
}

SynonymTable SynonymTable::parse(std::string_view text) {
  SynonymTable table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;

    auto fields = split_csv_record(line);
    if (!fields || fields->size() != 3)
      throw FormatError("synonym table line " + std::to_string(line_no) +
                        ": expected kind,raw,canonical");
    const auto kind = parse_kind(canonicalize((*fields)[0]));
    if (!kind)
      throw FormatError("synonym table line " + std::to_string(line_no) + ": unknown kind '" +
                        (*fields)[0] + "'");
    try {
      table.add(*kind, (*fields)[1], (*fields)[2]);
    } catch (const Error& e) {
      throw FormatError("synonym table line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return table;
}

SynonymTable SynonymTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open synonym table " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const SynonymTable& SynonymTable::builtin() {
  static const SynonymTable table = parse(default_synonym_text());
  return table;
}

void SynonymTable::add(LabelKind kind, std::string_view raw, std::string_view canonical) {
  auto saved = entries_;
  entries_[{kind, canonicalize(raw)}] = canonicalize(canonical);
  try {
    check_no_chain();
  } catch (...) {
    entries_ = std::move(saved);
    throw;
  }
}

std::string SynonymTable::normalize(std::string_view raw, LabelKind kind) const {
  std::string label = canonicalize(raw);
  if (auto it = entries_.find({kind, label}); it != entries_.end()) return it->second;
  return label;
}

std::size_t SynonymTable::size() const noexcept { return entries_.size(); }

std::string SynonymTable::to_text() const {
  std::string out = "# kind,raw,canonical\n";
  for (const auto& [key, canonical] : entries_) {
    out += to_string(key.first);
    out += ',';
    out += quote_csv_field(key.second);
    out += ',';
    out += quote_csv_field(canonical);
    out += '\n';
  }
  return out;
}

void SynonymTable::check_no_chain() const {
  for (const auto& [key, canonical] : entries_) {
    auto it = entries_.find({key.first, canonical});
    if (it != entries_.end() && it->second != canonical)
      throw FormatError("synonym table maps '" + key.second + "' to '" + canonical +
                        "', which is itself mapped to '" + it->second + "'");
  }
}

}  // namespace scenvar
