// Copyright 2026 The LBSD Authors
// Licensed under the Apache License, Version 2.0

// Command-line front end: generate, partition, allocate, replicate,
// evaluate, pipeline and scale.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lbsd/bench.hpp"
#include "lbsd/lbsd.hpp"

namespace fs = std::filesystem;
using namespace lbsd;

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> input;
  std::optional<std::size_t> k;
  std::optional<std::size_t> nodes;
  std::optional<double> threshold;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> workload;
  std::optional<std::size_t> sensors;
  std::optional<std::size_t> observations;
  std::optional<std::size_t> threads;
  std::optional<std::size_t> aet_repeats;
  bool single_pass = false;
  bool strict_threshold = false;
  std::string centrality_report;
  std::string scales = "1,2,3,4,5";
};

PipelineConfig resolve(const Flags& f) {
  PipelineConfig c;
  if (!f.config.empty()) c = config_from_json(nlohmann::json::parse(read_file(f.config)));
  if (f.input) c.input = *f.input;
  if (f.k) c.k = *f.k;
  if (f.nodes) c.m = *f.nodes;
  if (f.threshold) c.threshold = *f.threshold;
  if (f.seed) c.seed = *f.seed;
  if (f.out) c.out_dir = *f.out;
  if (f.workload) c.workload_path = *f.workload;
  if (f.sensors) c.sensors = *f.sensors;
  if (f.observations) c.observations_per_sensor = *f.observations;
  if (f.threads) c.threads = *f.threads;
  if (f.aet_repeats) c.aet_repeats = *f.aet_repeats;
  if (f.single_pass) c.growth = GrowthMode::SinglePass;
  if (f.strict_threshold) c.threshold_mode = ThresholdMode::Strict;
  validate(c);
  return c;
}

std::string require_out(const PipelineConfig& c) {
  if (c.out_dir.empty()) throw PreconditionError("--out is required");
  return c.out_dir;
}

struct Stage {
  TripleStore store;
  Plan plan;
};

Stage load_stage(const fs::path& dir) {
  Stage s;
  std::ifstream in(dir / "triples.nt", std::ios::binary);
  if (!in) throw Error("cannot open " + (dir / "triples.nt").string());
  s.store = parse_ntriples(in);
  s.plan = plan_from_json(nlohmann::json::parse(read_file(dir / "plan.json")), s.store);
  return s;
}

void save_stage(const fs::path& dir, const Stage& s, bool write_triples) {
  fs::create_directories(dir);
  if (write_triples) write_file(dir / "triples.nt", serialize_ntriples(s.store));
  write_file(dir / "plan.json", plan_to_json(s.plan).dump(1) + "\n");
}

std::vector<std::string> masters_of(const Plan& plan) {
  std::vector<std::string> masters;
  for (const auto& f : plan.partition.fragments) masters.push_back(f.master);
  return masters;
}

int cmd_generate(const PipelineConfig& c) {
  TripleStore store = load_store(c);
  const std::string out = require_out(c);
  if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
  write_file(out, serialize_ntriples(store));
  std::cout << "wrote " << store.size() << " triples to " << out << "\n";
  return 0;
}

int cmd_partition(const PipelineConfig& c) {
  Stage s;
  s.store = load_store(c);
  auto masters = extract_popular_subjects(s.store, c.k);
  s.plan.partition = grow_fragments(s.store, masters, c.growth);
  save_stage(require_out(c), s, true);
  std::cout << "partitioned " << s.store.size() << " triples into " << c.k << " fragments (orphans "
            << s.plan.partition.orphan_count << ")\n";
  return 0;
}

fs::path stage_dir(const PipelineConfig& c) {
  if (c.input.empty()) throw PreconditionError("--input must name a plan directory");
  return c.input;
}

int cmd_allocate(const PipelineConfig& c) {
  Stage s = load_stage(stage_dir(c));
  AllocationPlan alloc = allocate(fragment_sizes(s.plan.partition), c.m);
  s.plan.placement = place(s.plan.partition, alloc);
  s.plan.allocation = std::move(alloc);
  s.plan.replication.reset();
  save_stage(c.out_dir.empty() ? stage_dir(c) : fs::path(c.out_dir), s, !c.out_dir.empty());
  for (const auto& n : s.plan.allocation->nodes) std::cout << "node " << n.node_id << " load " << n.load << "\n";
  return 0;
}

int cmd_replicate(const PipelineConfig& c, const std::string& centrality_report) {
  Stage s = load_stage(stage_dir(c));
  if (!s.plan.placement) throw PreconditionError("plan has no node assignment; run allocate first");
  CentralityTable table = compute_centrality(s.store);
  const auto masters = masters_of(s.plan);
  double threshold = derive_threshold(table, s.store, masters, c.threshold);
  ReplicationOutcome outcome = replicate(*s.plan.placement, table, threshold, s.store, c.threshold_mode);
  s.plan.placement = std::move(outcome.placement);
  s.plan.replication = std::move(outcome.decision);
  s.plan.threshold_mode = c.threshold_mode;
  fs::path dir = c.out_dir.empty() ? stage_dir(c) : fs::path(c.out_dir);
  save_stage(dir, s, !c.out_dir.empty());
  std::ostringstream csv;
  write_centrality_csv(csv, table);
  write_file(centrality_report.empty() ? dir / "centrality.csv" : fs::path(centrality_report), csv.str());
  std::printf("threshold %.4f  replication level %.4f  replicated triples %zu\n", threshold,
              s.plan.replication->replication_level, s.plan.replication->replicated_positions.size());
  return 0;
}

int cmd_evaluate(const PipelineConfig& c) {
  Stage s = load_stage(stage_dir(c));
  if (!s.plan.placement) throw PreconditionError("plan has no node assignment; run allocate first");
  std::vector<QueryPattern> workload = c.workload_path.empty()
                                           ? generate_workload(s.store, c.seed)
                                           : workload_from_json(nlohmann::json::parse(read_file(c.workload_path)));
  Cluster cluster(s.store, *s.plan.placement);
  IncSummary inc = inc_report(cluster, workload, RoutingPolicy::BestCase, 0, c.threads);
  fs::path dir = c.out_dir.empty() ? stage_dir(c) : fs::path(c.out_dir);
  fs::create_directories(dir);
  std::ostringstream csv;
  write_inc_csv(csv, inc);
  write_file(dir / "inc.csv", csv.str());
  if (c.workload_path.empty()) write_file(dir / "workload.json", workload_to_json(workload).dump(2) + "\n");
  std::cout << csv.str();
  std::printf("fraction_local %.4f  mean_nodes_touched %.4f  mean_joins %.4f  mean_triples_scanned %.1f\n",
              inc.fraction_local, inc.mean_nodes_touched, inc.mean_joins, inc.mean_triples_scanned);
  return 0;
}

int cmd_pipeline(const PipelineConfig& c) {
  require_out(c);
  PipelineRun run = run_pipeline(c);
  auto problems = validate_plan(run.plan, run.store, &run.centrality);
  write_report_text(std::cout, run);
  for (const auto& p : problems) std::cerr << "plan invariant violated: " << p << "\n";
  return problems.empty() ? 0 : 1;
}

std::vector<std::size_t> parse_scales(const std::string& text) {
  std::vector<std::size_t> scales;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      long v = std::stol(item, &used);
      if (used != item.size() || v <= 0) throw std::invalid_argument(item);
      scales.push_back(static_cast<std::size_t>(v));
    } catch (const std::logic_error&) {
      throw PreconditionError("bad scale factor '" + item + "'");
    }
  }
  if (scales.empty()) throw PreconditionError("no scale factors given");
  return scales;
}

int cmd_scale(PipelineConfig c, const std::string& scales) {
  auto rows = run_scaling(c, parse_scales(scales));
  std::ostringstream csv;
  write_scaling_csv(csv, rows);
  if (!c.out_dir.empty()) {
    fs::path out(c.out_dir);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    write_file(out, csv.str());
  }
  std::cout << csv.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantic-aware RDF partitioning, load-balanced allocation and partial replication"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&f](CLI::App* sub) {
    sub->add_option("--config", f.config, "JSON config file; flags override it")->check(CLI::ExistingFile);
    sub->add_option("--input", f.input, "Input triples/CSV file, or a plan directory for later stages");
    sub->add_option("--seed", f.seed, "Seed for the generator and workload");
    sub->add_option("--out", f.out, "Output file or directory");
    sub->add_option("--threads", f.threads, "Worker threads for query evaluation");
  };
  auto generator = [&f](CLI::App* sub) {
    sub->add_option("--sensors", f.sensors, "Generated sensors");
    sub->add_option("--observations", f.observations, "Generated observations per sensor");
  };

  auto* gen = app.add_subcommand("generate", "Write a synthetic LOD-like N-Triples file (or convert a CSV input)");
  common(gen);
  generator(gen);

  auto* part = app.add_subcommand("partition", "Extract popular subjects and grow k fragments");
  common(part);
  generator(part);
  part->add_option("--k", f.k, "Number of fragments");
  part->add_flag("--single-pass", f.single_pass, "Score every pending subject group only once");

  auto* alloc = app.add_subcommand("allocate", "Place fragments of a plan directory onto nodes");
  common(alloc);
  alloc->add_option("--nodes", f.nodes, "Number of nodes");

  auto* repl = app.add_subcommand("replicate", "Replicate high-centrality predicates to every node");
  common(repl);
  repl->add_option("--threshold", f.threshold, "Centrality cut-off in (0,1]; derived when absent");
  repl->add_flag("--strict-threshold", f.strict_threshold, "Replicate only centrality strictly above the cut-off");
  repl->add_option("--centrality-report", f.centrality_report, "Where to write the centrality CSV");

  auto* eval = app.add_subcommand("evaluate", "Run a query workload against a plan directory");
  common(eval);
  eval->add_option("--workload", f.workload, "Workload JSON; generated from --seed when absent");

  auto* pipe = app.add_subcommand("pipeline", "Run every stage and write plan, reports and metrics");
  auto* scale = app.add_subcommand("scale", "Run the generator pipeline at several scales and emit CSV");
  for (auto* sub : {pipe, scale}) {
    common(sub);
    generator(sub);
    sub->add_option("--k", f.k, "Number of fragments");
    sub->add_option("--nodes", f.nodes, "Number of nodes");
    sub->add_option("--threshold", f.threshold, "Centrality cut-off in (0,1]; derived when absent");
    sub->add_flag("--single-pass", f.single_pass, "Score every pending subject group only once");
    sub->add_flag("--strict-threshold", f.strict_threshold, "Replicate only centrality strictly above the cut-off");
    sub->add_option("--workload", f.workload, "Workload JSON; generated from --seed when absent");
    sub->add_option("--aet-repeats", f.aet_repeats, "Runs per timed stage; the fastest is reported");
  }
  scale->add_option("--scales", f.scales, "Comma-separated scale factors");

  CLI11_PARSE(app, argc, argv);

  try {
    PipelineConfig c = resolve(f);
    if (*gen) return cmd_generate(c);
    if (*part) return cmd_partition(c);
    if (*alloc) return cmd_allocate(c);
    if (*repl) return cmd_replicate(c, f.centrality_report);
    if (*eval) return cmd_evaluate(c);
    if (*pipe) return cmd_pipeline(c);
    if (*scale) {
      if (!f.aet_repeats && f.config.empty()) c.aet_repeats = 15;
      retain_heap_for_timing();
      return cmd_scale(c, f.scales);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
