// Copyright 2026 The LBSD Authors
// Licensed under the Apache License, Version 2.0

#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "lbsd/lbsd.hpp"
#include "support.hpp"

namespace lbsd {
namespace {

using testing::lit;
using testing::res;

TEST(ParseNTriples, SingleStatement) {
  TripleStore s = parse_ntriples("<a> <p> <b> .\n");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].subject, "a");
  EXPECT_EQ(s[0].predicate, "p");
  EXPECT_EQ(s[0].object, "b");
  EXPECT_FALSE(s[0].object_is_literal);
}

TEST(ParseNTriples, EmptyInputIsEmptyStore) {
  EXPECT_EQ(parse_ntriples("").size(), 0u);
  EXPECT_TRUE(parse_ntriples("\n# only a comment\n   \n").empty());
}

TEST(ParseNTriples, ExactDuplicatesCollapse) {
  TripleStore s = parse_ntriples("<a> <p> <b> .\n<a> <p> <b> .\n");
  EXPECT_EQ(s.size(), 1u);
  EXPECT_EQ(s.duplicates_removed(), 1u);
  TripleStore again = parse_ntriples(serialize_ntriples(s));
  EXPECT_EQ(again.triples(), s.triples());
}

TEST(ParseNTriples, LiteralAndResourceWithSameTextDiffer) {
  TripleStore s = parse_ntriples("<a> <p> <b> .\n<a> <p> \"b\" .\n");
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.with_object("b").size(), 1u);
}

TEST(ParseNTriples, EscapesAndBlankNodes) {
  TripleStore s = parse_ntriples(R"(_:x <p> "tab\there \"q\" \u00E9" .)");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].subject, "_:x");
  EXPECT_EQ(s[0].object, "tab\there \"q\" \xC3\xA9");
  EXPECT_TRUE(s[0].object_is_literal);
}

TEST(ParseNTriples, GraphLabelIgnored) {
  TripleStore s = parse_ntriples("<a> <p> <b> <g> .\n");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].object, "b");
}

TEST(ParseNTriples, MalformedLineReportsLineNumber) {
  try {
    parse_ntriples("<a> <p> <b> .\n\n<a> <p> .\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_ntriples("<a> <p> \"x\"@en .\n"), ParseError);
  EXPECT_THROW(parse_ntriples("<a> <p> \"x\"^^<t> .\n"), ParseError);
  EXPECT_THROW(parse_ntriples("<a> <p> <b>\n"), ParseError);
  EXPECT_THROW(parse_ntriples("<a> <p> \"open .\n"), ParseError);
}

TEST(TripleStore, IndicesSkipLiteralObjects) {
  TripleStore s(std::vector<Triple>{res("a", "p", "b"), lit("a", "q", "b"), res("c", "p", "a")});
  EXPECT_EQ(s.with_subject("a").size(), 2u);
  EXPECT_EQ(s.with_object("b").size(), 1u);
  EXPECT_EQ(s.with_object("a").size(), 1u);
  EXPECT_EQ(s.with_predicate("p").size(), 2u);
  EXPECT_EQ(s.object_id(1), kNoTerm);
  EXPECT_EQ(s.subjects_in_order(), (std::vector<std::string>{"a", "c"}));
}

TEST(TripleStore, RejectsEmptySubject) {
  EXPECT_THROW(TripleStore(std::vector<Triple>{res("", "p", "b")}), PreconditionError);
}

// Round trip holds for arbitrary term text, including characters that need
// escaping in both IRIs and literals.
TEST(TripleIoProperty, SerializeParseRoundTrip) {
  Rng rng(7);
  const std::string alphabet = "ab <>\"\\\n\t{}|^`x:/#.\x01";
  auto text = [&] {
    std::string s;
    std::size_t len = 1 + rng.below(8);
    for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[rng.below(alphabet.size())]);
    return s;
  };
  for (int round = 0; round < 50; ++round) {
    std::vector<Triple> ts;
    for (int i = 0; i < 30; ++i) ts.push_back({text(), text(), text(), rng.below(2) == 0});
    TripleStore s(std::move(ts));
    TripleStore back = parse_ntriples(serialize_ntriples(s));
    ASSERT_EQ(back.triples(), s.triples());
  }
}

TEST(IngestCsv, OneRowOneColumn) {
  std::istringstream in("id,temp\ns1,20\n");
  CsvIngestResult r = ingest_csv(in, {"id", {{"hasTemp", "temp"}}, ""});
  ASSERT_EQ(r.store.size(), 1u);
  EXPECT_EQ(r.store[0], lit("s1", "hasTemp", "20"));
  EXPECT_EQ(r.rows, 1u);
}

TEST(IngestCsv, RowsTimesColumns) {
  std::istringstream in("id,a,b,c\nx,1,2,3\ny,4,5,6\n");
  CsvIngestResult r = ingest_csv(in, {"id", {{"pa", "a"}, {"pb", "b"}, {"pc", "c"}}, ""});
  EXPECT_EQ(r.store.size(), 2u * 3u);
  EXPECT_EQ(r.skipped_cells, 0u);
}

TEST(IngestCsv, EmptyCellSkippedAndCounted) {
  std::istringstream in("id,a,b\nx,,2\n");
  CsvIngestResult r = ingest_csv(in, {"id", {{"pa", "a"}, {"pb", "b"}}, ""});
  EXPECT_EQ(r.store.size(), 1u);
  EXPECT_EQ(r.skipped_cells, 1u);
}

TEST(IngestCsv, QuotedFieldsAndResourceColumns) {
  std::istringstream in("id,name,link\n\"s,1\",\"say \"\"hi\"\"\nthere\",t2\n");
  CsvIngestResult r = ingest_csv(in, {"id", {{"name", "name"}, {"near", "link", false}}, "ex:"});
  ASSERT_EQ(r.store.size(), 2u);
  EXPECT_EQ(r.store[0], lit("ex:s,1", "name", "say \"hi\"\nthere"));
  EXPECT_EQ(r.store[1], res("ex:s,1", "near", "ex:t2"));
}

TEST(IngestCsv, MissingColumnNamed) {
  std::istringstream in("id,temp\ns1,20\n");
  try {
    ingest_csv(in, {"id", {{"hasHum", "humidity"}}, ""});
    FAIL() << "expected IngestError";
  } catch (const IngestError& e) {
    EXPECT_NE(std::string(e.what()).find("humidity"), std::string::npos);
  }
}

TEST(GenerateLodLike, ZeroSensorsIsEmpty) { EXPECT_TRUE(generate_lod_like(1, 0, 5).empty()); }

TEST(GenerateLodLike, Deterministic) {
  EXPECT_EQ(serialize_ntriples(generate_lod_like(1, 2, 3)), serialize_ntriples(generate_lod_like(1, 2, 3)));
  EXPECT_NE(serialize_ntriples(generate_lod_like(1, 5, 20)), serialize_ntriples(generate_lod_like(2, 5, 20)));
}

TEST(GenerateLodLike, CountsFollowConstruction) {
  TripleStore s = generate_lod_like(1, 10, 100);
  EXPECT_LE(s.subject_index().size(), 10u + 10u * 100u);
  EXPECT_GE(s.size(), 10u * 100u);
  // every observation: one link plus 4..6 readings
  std::size_t observations = s.with_predicate(vocab::kGeneratedObservation).size();
  EXPECT_EQ(observations, 1000u);
  std::size_t readings = s.size() - observations - 2 * 10;
  EXPECT_GE(readings, 4u * observations);
  EXPECT_LE(readings, 6u * observations);
}

TEST(GenerateLodLike, HubsAreSkewed) {
  TripleStore s = generate_lod_like(3, 20, 50);
  auto top = extract_popular_subjects(s, 1);
  // Zipf(1) over 20 sensors: the busiest gets 1/H(20) ~ 28% of observations
  EXPECT_GT(s.with_subject(top[0]).size(), 200u);
}

}  // namespace
}  // namespace lbsd
