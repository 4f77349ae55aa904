#include "scenvar/error.hpp"
#include "scenvar/labels.hpp"

#include <gtest/gtest.h>

using namespace scenvar;

TEST(Labels, TrimsAndLowercases) { EXPECT_EQ(normalize_label("  Wheat ", LabelKind::item), "wheat"); }

TEST(Labels, CollapsesInternalWhitespace) {
  EXPECT_EQ(canonicalize(" Nutritional \t  Value "), "nutritional value");
}

TEST(Labels, ShippedSynonymTableMapsRegions) {
  EXPECT_EQ(normalize_label("United Arab Emirates", LabelKind::region), "uae");
  EXPECT_EQ(normalize_label("  united   ARAB emirates", LabelKind::region), "uae");
  EXPECT_EQ(normalize_label("Russian Federation", LabelKind::region), "russia");
}

TEST(Labels, SynonymsAreScopedByKind) {
  // "United Arab Emirates" is a region synonym only
  EXPECT_EQ(normalize_label("United Arab Emirates", LabelKind::item), "united arab emirates");
}

TEST(Labels, UnmappedNonAsciiPassesThroughLowercased) {
  EXPECT_EQ(normalize_label("Производство", LabelKind::metric), "производство");
  EXPECT_EQ(normalize_label("ÉLEVAGE", LabelKind::metric), "élevage");
}

TEST(Labels, EmptyLabelIsRejected) {
  EXPECT_THROW(normalize_label("", LabelKind::item), LabelError);
  EXPECT_THROW(normalize_label(" \t ", LabelKind::item), LabelError);
}

TEST(Labels, NormalizeIsIdempotentAndCaseInsensitive) {
  for (const char* raw : {"United Arab Emirates", "Wheat and products", "  Producer   price", "Пшеница", "uae"}) {
    for (auto kind : {LabelKind::metric, LabelKind::item, LabelKind::region}) {
      const auto once = normalize_label(raw, kind);
      EXPECT_EQ(normalize_label(once, kind), once) << raw;
      std::string upper(raw);
      for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      EXPECT_EQ(normalize_label(upper, kind), once) << raw;
    }
  }
}

TEST(Labels, ParseIgnoresCommentsAndBlankLines) {
  const auto table = SynonymTable::parse("# header\n\nregion, Holland ,netherlands\nitem,Corn,maize\n");
  EXPECT_EQ(table.size(), 2u);
  EXPECT_EQ(table.normalize("holland", LabelKind::region), "netherlands");
  EXPECT_EQ(table.normalize("CORN", LabelKind::item), "maize");
}

TEST(Labels, ParseRejectsMalformedLines) {
  EXPECT_THROW(SynonymTable::parse("region,only-two\n"), FormatError);
  EXPECT_THROW(SynonymTable::parse("planet,mars,red\n"), FormatError);
}

TEST(Labels, ChainsAreRejected) {
  SynonymTable table;
  table.add(LabelKind::region, "a", "b");
  EXPECT_THROW(table.add(LabelKind::region, "b", "c"), FormatError);
  EXPECT_THROW(table.add(LabelKind::region, "z", "a"), FormatError);
  EXPECT_EQ(table.size(), 1u);
  EXPECT_THROW(SynonymTable::parse("item,x,y\nitem,y,z\n"), FormatError);
}

TEST(Labels, BuiltinMatchesShippedFile) {
  const auto parsed = SynonymTable::parse(default_synonym_text());
  EXPECT_EQ(parsed.size(), SynonymTable::builtin().size());
  EXPECT_GT(parsed.size(), 10u);
  EXPECT_EQ(SynonymTable::parse(parsed.to_text()).to_text(), parsed.to_text());
}
