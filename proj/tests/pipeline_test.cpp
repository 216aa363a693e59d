// Copyright 2026 The LBSD Authors
// Licensed under the Apache License, Version 2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "lbsd/lbsd.hpp"
#include "support.hpp"

namespace lbsd {
namespace {

namespace fs = std::filesystem;

PipelineConfig small_config() {
  PipelineConfig c;
  c.sensors = 12;
  c.observations_per_sensor = 40;
  c.k = 4;
  c.m = 3;
  c.threshold = kThresholdHigh;
  return c;
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("lbsd_test_" + name);
  fs::remove_all(dir);
  return dir;
}

TEST(Plan, FullPlanValidates) {
  PipelineRun run = execute_pipeline(load_store(small_config()), small_config());
  EXPECT_TRUE(validate_plan(run.plan, run.store, &run.centrality).empty());
  EXPECT_EQ(run.plan.partition.k(), 4u);
  EXPECT_EQ(run.plan.allocation->m(), 3u);
}

TEST(Plan, JsonRoundTripValidates) {
  PipelineRun run = execute_pipeline(load_store(small_config()), small_config());
  nlohmann::json j = plan_to_json(run.plan);
  TripleStore reread = parse_ntriples(serialize_ntriples(run.store));
  Plan back = plan_from_json(nlohmann::json::parse(j.dump()), reread);
  EXPECT_TRUE(validate_plan(back, reread, &run.centrality).empty());
  EXPECT_EQ(plan_to_json(back), j);
}

TEST(Plan, ValidatorCatchesBrokenPlans) {
  PipelineRun run = execute_pipeline(load_store(small_config()), small_config());
  const TripleStore& s = run.store;

  Plan missing = run.plan;
  missing.partition.fragments[0].members.pop_back();
  EXPECT_FALSE(validate_plan(missing, s).empty());

  Plan split = run.plan;
  // move one triple of a multi-triple subject into another fragment
  for (const auto& [subject, positions] : s.subject_index()) {
    if (positions.size() < 2) continue;
    std::size_t pos = positions.front();
    std::size_t from = split.partition.fragment_of[pos];
    std::size_t to = (from + 1) % split.partition.k();
    auto& members = split.partition.fragments[from].members;
    members.erase(std::find(members.begin(), members.end(), pos));
    auto& dest = split.partition.fragments[to].members;
    dest.insert(std::upper_bound(dest.begin(), dest.end(), pos), pos);
    split.partition.fragment_of[pos] = to;
    break;
  }
  EXPECT_FALSE(validate_plan(split, s).empty());

  Plan doubled = run.plan;
  doubled.allocation->nodes[1].fragment_ids.push_back(doubled.allocation->nodes[0].fragment_ids.front());
  EXPECT_FALSE(validate_plan(doubled, s).empty());

  Plan wrong_replicas = run.plan;
  wrong_replicas.replication->replicated_predicates.insert("ex:airTemperature");
  EXPECT_FALSE(validate_plan(wrong_replicas, s, &run.centrality).empty());
}

TEST(Plan, RejectsMalformedJson) {
  PipelineRun run = execute_pipeline(load_store(small_config()), small_config());
  nlohmann::json j = plan_to_json(run.plan);
  j["fragments"][0]["tripleRefs"].push_back(run.store.size() + 5);
  EXPECT_THROW(plan_from_json(j, run.store), Error);
  EXPECT_THROW(plan_from_json(nlohmann::json::parse("{}"), run.store), Error);
}

TEST(Pipeline, ReportHasEveryMetricSection) {
  PipelineRun run = execute_pipeline(load_store(small_config()), small_config());
  nlohmann::json r = report_to_json(run);
  for (const char* key : {"aetMs", "fragmentSizes", "nodeLoads", "replication", "inc"}) {
    EXPECT_TRUE(r.contains(key)) << key;
  }
  EXPECT_TRUE(r["inc"].contains("roundRobin"));
  ASSERT_TRUE(run.inc);
  EXPECT_EQ(run.inc->queries.size(), 12u);
  std::ostringstream text;
  write_report_text(text, run);
  EXPECT_NE(text.str().find("fraction_local"), std::string::npos);
}

TEST(Pipeline, DegenerateSingleFragmentSingleNode) {
  PipelineConfig c = small_config();
  c.k = 1;
  c.m = 1;
  c.threshold.reset();
  PipelineRun run = execute_pipeline(load_store(c), c);
  EXPECT_EQ(run.plan.partition.k(), 1u);
  EXPECT_EQ(run.plan.partition.fragments[0].size(), run.store.size());
  ASSERT_TRUE(run.inc);
  EXPECT_DOUBLE_EQ(run.inc->fraction_local, 1.0);
}

TEST(Pipeline, WritesIdenticalFilesTwice) {
  PipelineConfig c = small_config();
  fs::path a = scratch("det_a");
  fs::path b = scratch("det_b");
  c.out_dir = a.string();
  run_pipeline(c);
  c.out_dir = b.string();
  c.threads = 3;
  run_pipeline(c);
  for (const char* f : {"plan.json", "triples.nt", "centrality.csv", "workload.json", "inc.csv"}) {
    EXPECT_EQ(read_file(a / f), read_file(b / f)) << f;
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Pipeline, ReadsNTriplesAndCsvInputs) {
  fs::path dir = scratch("inputs");
  fs::create_directories(dir);
  write_file(dir / "in.nt", serialize_ntriples(generate_lod_like(2, 6, 10)));
  write_file(dir / "in.csv", "id,temp,near\ns1,20,s2\ns2,25,s1\ns3,30,s1\n");

  PipelineConfig c = small_config();
  c.k = 2;
  c.input = (dir / "in.nt").string();
  EXPECT_EQ(run_pipeline(c).store.size(), generate_lod_like(2, 6, 10).size());

  c.input = (dir / "in.csv").string();
  c.csv_mapping = CsvMapping{"id", {{"temp", "temp"}, {"near", "near", false}}, "ex:"};
  PipelineRun run = run_pipeline(c);
  EXPECT_EQ(run.store.size(), 6u);
  EXPECT_TRUE(validate_plan(run.plan, run.store, &run.centrality).empty());

  c.input = (dir / "missing.nt").string();
  EXPECT_THROW(run_pipeline(c), Error);
  fs::remove_all(dir);
}

TEST(Pipeline, ConfigFromJson) {
  auto j = nlohmann::json::parse(R"({"seed": 4, "k": 6, "nodes": 2, "threshold": 0.51, "singlePass": true,
                                     "strictThreshold": true, "aetRepeats": 3})");
  PipelineConfig c = config_from_json(j);
  EXPECT_EQ(c.seed, 4u);
  EXPECT_EQ(c.k, 6u);
  EXPECT_EQ(c.m, 2u);
  EXPECT_DOUBLE_EQ(*c.threshold, 0.51);
  EXPECT_EQ(c.growth, GrowthMode::SinglePass);
  EXPECT_EQ(c.threshold_mode, ThresholdMode::Strict);
  EXPECT_EQ(c.aet_repeats, 3u);
  PipelineConfig bad;
  bad.k = 0;
  EXPECT_THROW(validate(bad), PreconditionError);
}

TEST(Scaling, SingleScaleSingleRow) {
  PipelineConfig c = small_config();
  auto rows = run_scaling(c, {1});
  ASSERT_EQ(rows.size(), 1u);
  std::ostringstream out;
  write_scaling_csv(out, rows);
  std::string csv = out.str();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  c.input = "x.nt";
  EXPECT_THROW(run_scaling(c, {1}), PreconditionError);
}

TEST(Scaling, TriplesGrowWithScale) {
  auto rows = run_scaling(small_config(), {1, 2, 3});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_LT(rows[0].triples, rows[1].triples);
  EXPECT_LT(rows[1].triples, rows[2].triples);
}

TEST(FitLine, ExactLineAndNoise) {
  std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> y{3, 5, 7, 9, 11};
  LinearFit f = fit_line(x, y);
  EXPECT_DOUBLE_EQ(f.slope, 2.0);
  EXPECT_DOUBLE_EQ(f.intercept, 1.0);
  EXPECT_DOUBLE_EQ(f.r2, 1.0);
  std::vector<double> flat{1, 9, 1, 9, 1};
  EXPECT_LT(fit_line(x, flat).r2, 0.1);
  std::vector<double> one{1};
  EXPECT_THROW(fit_line(one, one), PreconditionError);
}

}  // namespace
}  // namespace lbsd
