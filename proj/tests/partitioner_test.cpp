// Copyright 2026 The LBSD Authors
// Licensed under the Apache License, Version 2.0

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "lbsd/lbsd.hpp"
#include "support.hpp"

namespace lbsd {
namespace {

using testing::lit;
using testing::make_store;
using testing::res;

TEST(ExtractPopularSubjects, HighestCountFirst) {
  TripleStore s = make_store({res("a", "p", "x"), res("a", "p", "y"), res("b", "q", "z")});
  EXPECT_EQ(extract_popular_subjects(s, 1), (std::vector<std::string>{"a"}));
}

TEST(ExtractPopularSubjects, TiesBrokenByName) {
  TripleStore s = make_store({res("b", "q", "z"), res("a", "p", "x")});
  EXPECT_EQ(extract_popular_subjects(s, 2), (std::vector<std::string>{"a", "b"}));
}

TEST(ExtractPopularSubjects, AllSubjects) {
  TripleStore s = make_store({res("c", "p", "x"), res("b", "p", "x"), res("b", "p", "y"), res("a", "p", "x")});
  EXPECT_EQ(extract_popular_subjects(s, 3), (std::vector<std::string>{"b", "a", "c"}));
}

TEST(ExtractPopularSubjects, TooFewSubjects) {
  TripleStore s = make_store({res("a", "p", "x"), res("b", "p", "x")});
  try {
    extract_popular_subjects(s, 3);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("only 2 distinct"), std::string::npos);
  }
  EXPECT_THROW(extract_popular_subjects(s, 0), PreconditionError);
}

TEST(ExtractPopularSubjects, MatchesBruteForce) {
  Rng rng(11);
  for (int i = 0; i < 40; ++i) {
    TripleStore s = testing::random_store(rng, {300 + rng.below(700), 10 + rng.below(90), 4, 0.5});
    std::size_t k = 1 + rng.below(8);
    ASSERT_EQ(extract_popular_subjects(s, k), testing::brute_top_k(s, k)) << "store " << i;
  }
}

TEST(SubjectFrequencies, CountsOutDegree) {
  TripleStore s = make_store({res("a", "p", "x"), lit("a", "q", "1"), res("b", "p", "a")});
  auto t = subject_frequencies(s);
  EXPECT_EQ(t.at("a"), 2u);
  EXPECT_EQ(t.at("b"), 1u);
  EXPECT_EQ(t.count("x"), 0u);
}

TEST(GrowFragments, ObjectPullsSubjectGroup) {
  TripleStore s = make_store({res("a", "p", "b"), res("b", "p", "c")});
  std::vector<std::string> masters{"a"};
  PartitionResult r = grow_fragments(s, masters);
  ASSERT_EQ(r.k(), 1u);
  EXPECT_EQ(r.fragments[0].members, (PositionList{0, 1}));
  EXPECT_EQ(r.orphan_count, 0u);
}

TEST(GrowFragments, UnreachableSubjectIsOrphan) {
  TripleStore s = make_store({res("a", "p", "x"), res("c", "p", "y")});
  std::vector<std::string> masters{"a"};
  PartitionResult r = grow_fragments(s, masters);
  EXPECT_EQ(r.fragments[0].members, (PositionList{0, 1}));
  EXPECT_EQ(r.orphan_count, 1u);
}

TEST(GrowFragments, MastersCoverEverything) {
  TripleStore s = make_store({res("a", "p", "b"), res("b", "p", "a"), lit("a", "q", "1")});
  std::vector<std::string> masters{"a", "b"};
  PartitionResult r = grow_fragments(s, masters);
  EXPECT_EQ(r.fragments[0].members, (PositionList{0, 2}));
  EXPECT_EQ(r.fragments[1].members, (PositionList{1}));
  EXPECT_EQ(r.orphan_count, 0u);
}

TEST(GrowFragments, HigherObjectFrequencyWins) {
  // d is referenced once from fragment 0 and twice from fragment 1
  TripleStore s = make_store({res("a", "p", "d"), res("b", "p", "d"), res("b", "q", "d"), lit("d", "v", "1")});
  std::vector<std::string> masters{"a", "b"};
  PartitionResult r = grow_fragments(s, masters);
  EXPECT_EQ(r.fragment_of[3], 1u);
  EXPECT_EQ(r.fragments[1].object_frequency.at("d"), 2u);
}

TEST(GrowFragments, TieGoesToLowerFragment) {
  TripleStore s = make_store({res("a", "p", "d"), res("b", "p", "d"), lit("d", "v", "1")});
  std::vector<std::string> masters{"b", "a"};
  PartitionResult r = grow_fragments(s, masters);
  EXPECT_EQ(r.fragment_of[2], 0u);
}

TEST(GrowFragments, OrphanGoesToSmallestAndFixpointResumes) {
  // e is unreachable; f hangs off e only
  TripleStore s = make_store({res("a", "p", "x"), res("a", "p", "y"), res("b", "p", "z"), res("e", "p", "f"),
                              lit("f", "v", "1")});
  std::vector<std::string> masters{"a", "b"};
  PartitionResult fix = grow_fragments(s, masters, GrowthMode::Fixpoint);
  EXPECT_EQ(fix.fragment_of[3], 1u);
  EXPECT_EQ(fix.fragment_of[4], 1u);
  EXPECT_EQ(fix.orphan_count, 1u);

  PartitionResult single = grow_fragments(s, masters, GrowthMode::SinglePass);
  EXPECT_EQ(single.orphan_count, 2u);
  EXPECT_EQ(testing::partition_violations(s, single), 0u);
}

TEST(GrowFragments, FixpointReachesChainsSeenOutOfOrder) {
  // c's triple comes before b is pulled in, so a single pass strands it
  TripleStore s = make_store({res("c", "p", "x"), res("a", "p", "b"), res("b", "p", "c"), res("z", "p", "w")});
  std::vector<std::string> masters{"a", "z"};
  PartitionResult fix = grow_fragments(s, masters);
  EXPECT_EQ(fix.fragment_of[0], 0u);
  EXPECT_EQ(fix.orphan_count, 0u);
  PartitionResult single = grow_fragments(s, masters, GrowthMode::SinglePass);
  EXPECT_EQ(single.orphan_count, 1u);
}

TEST(GrowFragments, RejectsBadMasters) {
  TripleStore s = make_store({res("a", "p", "x")});
  std::vector<std::string> none;
  std::vector<std::string> missing{"q"};
  std::vector<std::string> twice{"a", "a"};
  EXPECT_THROW(grow_fragments(s, none), PreconditionError);
  EXPECT_THROW(grow_fragments(s, missing), PreconditionError);
  EXPECT_THROW(grow_fragments(s, twice), PreconditionError);
}

class GrowProperties : public ::testing::TestWithParam<GrowthMode> {};

TEST_P(GrowProperties, CompleteCohesiveDeterministic) {
  Rng rng(23);
  for (int i = 0; i < 30; ++i) {
    TripleStore s = testing::random_store(rng, {200 + rng.below(2000), 20 + rng.below(200), 5, 0.6});
    std::size_t k = 2 + rng.below(7);
    auto masters = extract_popular_subjects(s, k);
    PartitionResult r = grow_fragments(s, masters, GetParam());
    ASSERT_EQ(testing::partition_violations(s, r), 0u);
    for (std::size_t f = 0; f < k; ++f) {
      EXPECT_EQ(r.fragments[f].master, masters[f]);
      for (std::size_t pos : s.with_subject(masters[f])) EXPECT_EQ(r.fragment_of[pos], f);
    }
    PartitionResult again = grow_fragments(s, masters, GetParam());
    for (std::size_t f = 0; f < k; ++f) EXPECT_EQ(again.fragments[f].members, r.fragments[f].members);
    EXPECT_EQ(again.orphan_count, r.orphan_count);
  }
}

// Every subject placed by growth was referenced by its fragment.
TEST_P(GrowProperties, GrownSubjectsAreReferenced) {
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    TripleStore s = testing::random_store(rng, {1500, 150, 4, 0.7});
    auto masters = extract_popular_subjects(s, 4);
    PartitionResult r = grow_fragments(s, masters, GetParam());
    std::size_t orphan_triples = 0;
    for (const auto& [subject, positions] : s.subject_index()) {
      std::size_t f = r.fragment_of[positions.front()];
      if (subject == masters[f]) continue;
      auto it = r.fragments[f].object_frequency.find(subject);
      if (it == r.fragments[f].object_frequency.end()) orphan_triples += positions.size();
    }
    EXPECT_LE(orphan_triples, r.orphan_count);
  }
}

INSTANTIATE_TEST_SUITE_P(Modes, GrowProperties, ::testing::Values(GrowthMode::Fixpoint, GrowthMode::SinglePass));

}  // namespace
}  // namespace lbsd
