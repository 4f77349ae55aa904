#include "scenvar/csv.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace scenvar;

TEST(Csv, SplitsPlainFields) {
  const auto f = split_csv_record("a,b,,d");
  ASSERT_TRUE(f);
  EXPECT_EQ(*f, (std::vector<std::string>{"a", "b", "", "d"}));
}

TEST(Csv, HandlesQuotesAndEscapes) {
  const auto f = split_csv_record(R"(x,"a, b","say ""hi""",)");
  ASSERT_TRUE(f);
  EXPECT_EQ(*f, (std::vector<std::string>{"x", "a, b", "say \"hi\"", ""}));
}

TEST(Csv, UnterminatedQuoteFails) { EXPECT_FALSE(split_csv_record("a,\"b")); }

TEST(Csv, CustomDelimiter) {
  const auto f = split_csv_record("a;b;c", {';', '"'});
  ASSERT_TRUE(f);
  EXPECT_EQ(f->size(), 3u);
}

TEST(Csv, ReadsMultilineRecords) {
  std::istringstream in("a,\"line1\nline2\",c\r\nnext,row,x\n");
  std::string rec;
  ASSERT_TRUE(read_csv_record(in, rec));
  const auto f = split_csv_record(rec);
  ASSERT_TRUE(f);
  EXPECT_EQ((*f)[1], "line1\nline2");
  EXPECT_EQ((*f)[2], "c");
  ASSERT_TRUE(read_csv_record(in, rec));
  EXPECT_EQ(rec, "next,row,x");
  EXPECT_FALSE(read_csv_record(in, rec));
}

TEST(Csv, QuoteRoundTrips) {
  for (std::string s : {"plain", "with,comma", "with \"quote\"", "multi\nline", ""}) {
    const auto f = split_csv_record(quote_csv_field(s) + "," + quote_csv_field("x"));
    ASSERT_TRUE(f) << s;
    EXPECT_EQ((*f)[0], s);
  }
  EXPECT_EQ(quote_csv_field("plain"), "plain");
}

TEST(Csv, Utf8Validation) {
  EXPECT_TRUE(is_valid_utf8("plain ascii"));
  EXPECT_TRUE(is_valid_utf8("Производство"));
  EXPECT_FALSE(is_valid_utf8("\xff\xfe"));
  EXPECT_FALSE(is_valid_utf8("\xc3"));
  EXPECT_FALSE(is_valid_utf8("\xc0\xaf"));  // overlong
}
