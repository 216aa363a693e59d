// Copyright 2026 The LBSD Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "lbsd/allocator.hpp"
#include "lbsd/error.hpp"
#include "lbsd/partitioner.hpp"
#include "lbsd/replicator.hpp"
#include "lbsd/triple_store.hpp"

namespace lbsd {

/// Everything needed to deploy a store: fragments, their nodes and the
/// replicas. Stages fill it in order; allocation and replication may be
/// absent in a partially built plan.
struct Plan {
  PartitionResult partition;
  std::optional<AllocationPlan> allocation;
  std::optional<Placement> placement;
  std::optional<ReplicationDecision> replication;
  ThresholdMode threshold_mode = ThresholdMode::Inclusive;
};

/// Plan file. tripleRefs are line numbers (0-based) in the canonical
/// N-Triples file written next to it.
inline nlohmann::json plan_to_json(const Plan& plan) {
  using nlohmann::json;
  json out;
  out["k"] = plan.partition.k();
  out["m"] = plan.allocation ? plan.allocation->m() : 0;
  out["orphanCount"] = plan.partition.orphan_count;
  out["fragments"] = json::array();
  for (const auto& f : plan.partition.fragments) {
    out["fragments"].push_back({{"id", f.id}, {"master", f.master}, {"tripleRefs", f.members}});
  }
  out["nodes"] = json::array();
  if (plan.allocation) {
    for (const auto& n : plan.allocation->nodes) {
      out["nodes"].push_back({{"id", n.node_id}, {"fragmentIds", n.fragment_ids}, {"load", n.load}});
    }
  }
  out["replicas"] = json::array();
  if (plan.replication && plan.placement) {
    for (const auto& r : plan.placement->replicas()) out["replicas"].push_back(r);
    out["threshold"] = plan.replication->threshold;
    out["thresholdMode"] = plan.threshold_mode == ThresholdMode::Strict ? "strict" : "inclusive";
    out["replicatedPredicates"] = plan.replication->replicated_predicates;
  }
  return out;
}

/// Rebuilds a plan against the store it was written for. Derived data
/// (fragment_of, object frequencies, loads, owners) is recomputed from the
/// store; structural errors raise PreconditionError.
inline Plan plan_from_json(const nlohmann::json& in, const TripleStore& store) {
  Plan plan;
  try {
    const std::size_t n = store.size();
    plan.partition.orphan_count = in.value("orphanCount", std::size_t{0});
    plan.partition.fragment_of.assign(n, 0);
    std::vector<bool> seen(n, false);
    for (const auto& jf : in.at("fragments")) {
      Fragment f;
      f.id = jf.at("id").get<std::size_t>();
      f.master = jf.at("master").get<std::string>();
      f.members = jf.at("tripleRefs").get<PositionList>();
      if (f.id != plan.partition.fragments.size()) throw PreconditionError("fragment ids must be 0..k-1 in order");
      for (std::size_t pos : f.members) {
        if (pos >= n) throw PreconditionError("tripleRef " + std::to_string(pos) + " out of range");
        if (seen[pos]) throw PreconditionError("triple " + std::to_string(pos) + " in more than one fragment");
        seen[pos] = true;
        plan.partition.fragment_of[pos] = f.id;
        const Triple& t = store[pos];
        if (!t.object_is_literal) ++f.object_frequency[t.object];
      }
      plan.partition.fragments.push_back(std::move(f));
    }
    if (in.at("k").get<std::size_t>() != plan.partition.k()) throw PreconditionError("k does not match fragments");
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      throw PreconditionError("fragments do not cover every triple");
    }

    const auto& jnodes = in.at("nodes");
    if (!jnodes.empty()) {
      AllocationPlan alloc;
      for (const auto& jn : jnodes) {
        NodeAssignment node;
        node.node_id = jn.at("id").get<std::size_t>();
        if (node.node_id != alloc.nodes.size()) throw PreconditionError("node ids must be 0..m-1 in order");
        node.fragment_ids = jn.at("fragmentIds").get<std::vector<std::size_t>>();
        for (std::size_t f : node.fragment_ids) {
          if (f >= plan.partition.k()) throw PreconditionError("node references unknown fragment");
          node.load += plan.partition.fragments[f].size();
        }
        alloc.nodes.push_back(std::move(node));
      }
      if (in.at("m").get<std::size_t>() != alloc.m()) throw PreconditionError("m does not match nodes");
      plan.placement = place(plan.partition, alloc);
      plan.allocation = std::move(alloc);
    }

    const auto& jreplicas = in.at("replicas");
    if (!jreplicas.empty()) {
      if (!plan.placement) throw PreconditionError("replicas present without node assignment");
      std::vector<PositionList> replicas;
      for (const auto& r : jreplicas) replicas.push_back(r.get<PositionList>());
      if (replicas.size() != plan.placement->node_count()) throw PreconditionError("one replica list per node expected");
      for (std::size_t node = 0; node < replicas.size(); ++node) {
        std::set<std::size_t> unique(replicas[node].begin(), replicas[node].end());
        if (unique.size() != replicas[node].size()) throw PreconditionError("duplicate replica on a node");
        for (std::size_t pos : replicas[node]) {
          if (pos >= n) throw PreconditionError("replica ref out of range");
          if (plan.placement->owner(pos) == node) throw PreconditionError("replica of an owned triple");
        }
      }
      plan.placement->set_replicas(std::move(replicas));
    }
    if (in.contains("threshold")) {
      ReplicationDecision d;
      d.threshold = in.at("threshold").get<double>();
      plan.threshold_mode = in.value("thresholdMode", std::string("inclusive")) == "strict" ? ThresholdMode::Strict
                                                                                           : ThresholdMode::Inclusive;
      for (const auto& p : in.at("replicatedPredicates")) d.replicated_predicates.insert(p.get<std::string>());
      for (const auto& p : d.replicated_predicates) {
        for (std::size_t pos : store.with_predicate(p)) d.replicated_positions.push_back(pos);
      }
      std::sort(d.replicated_positions.begin(), d.replicated_positions.end());
      d.replication_level =
          n == 0 ? 0.0 : static_cast<double>(d.replicated_positions.size()) / static_cast<double>(n);
      d.replica_copies = plan.placement ? plan.placement->replica_copies() : 0;
      plan.replication = std::move(d);
    }
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed plan file: ") + e.what());
  }
  return plan;
}

/// Checks partition, allocation and replication invariants. Returns one
/// message per violation; empty means the plan is sound.
inline std::vector<std::string> validate_plan(const Plan& plan, const TripleStore& store,
                                              const CentralityTable* centrality = nullptr) {
  std::vector<std::string> problems;
  const std::size_t n = store.size();
  const auto& frags = plan.partition.fragments;

  std::vector<std::size_t> count(n, 0);
  for (const auto& f : frags) {
    for (std::size_t pos : f.members) {
      if (pos < n) ++count[pos];
    }
    std::unordered_map<std::string, std::size_t> expected;
    for (std::size_t pos : f.members) {
      if (pos < n && !store[pos].object_is_literal) ++expected[store[pos].object];
    }
    if (expected != f.object_frequency) {
      problems.push_back("fragment " + std::to_string(f.id) + " object frequencies disagree with its triples");
    }
    for (std::size_t pos : store.with_subject(f.master)) {
      if (plan.partition.fragment_of[pos] != f.id) {
        problems.push_back("master '" + f.master + "' has a triple outside fragment " + std::to_string(f.id));
        break;
      }
    }
  }
  for (std::size_t pos = 0; pos < n; ++pos) {
    if (count[pos] != 1) {
      problems.push_back("triple " + std::to_string(pos) + " is in " + std::to_string(count[pos]) + " fragments");
    }
  }
  for (const auto& [subject, positions] : store.subject_index()) {
    for (std::size_t pos : positions) {
      if (plan.partition.fragment_of[pos] != plan.partition.fragment_of[positions.front()]) {
        problems.push_back("subject '" + subject + "' is split across fragments");
        break;
      }
    }
  }

  if (plan.allocation) {
    std::vector<std::size_t> placed(frags.size(), 0);
    std::size_t largest = 0;
    for (const auto& f : frags) largest = std::max(largest, f.size());
    for (const auto& node : plan.allocation->nodes) {
      std::size_t load = 0;
      for (std::size_t f : node.fragment_ids) {
        if (f < frags.size()) {
          ++placed[f];
          load += frags[f].size();
        }
      }
      if (load != node.load) problems.push_back("node " + std::to_string(node.node_id) + " load mismatch");
    }
    for (std::size_t f = 0; f < placed.size(); ++f) {
      if (placed[f] != 1) problems.push_back("fragment " + std::to_string(f) + " placed " + std::to_string(placed[f]) + " times");
    }
    if (plan.allocation->max_load() - plan.allocation->min_load() > largest) {
      problems.push_back("node load spread exceeds the largest fragment");
    }
  }

  if (plan.replication && plan.placement) {
    const auto& d = *plan.replication;
    const auto& placement = *plan.placement;
    if (centrality) {
      for (const auto& [p, deg] : centrality->entries) {
        bool qualifies =
            plan.threshold_mode == ThresholdMode::Strict ? deg.centrality > d.threshold : deg.centrality >= d.threshold;
        if (qualifies != d.replicated_predicates.contains(p)) {
          problems.push_back("predicate '" + p + "' replication disagrees with its centrality");
        }
      }
    }
    for (std::size_t pos = 0; pos < n; ++pos) {
      bool replicated = d.replicated_predicates.contains(store[pos].predicate);
      for (std::size_t node = 0; node < placement.node_count(); ++node) {
        if (placement.owner(pos) == node) continue;
        if (placement.has_replica(node, pos) != replicated) {
          problems.push_back("triple " + std::to_string(pos) + " replica on node " + std::to_string(node) +
                             " disagrees with its predicate");
          break;
        }
      }
    }
    for (std::size_t node = 0; node < placement.node_count(); ++node) {
      const auto& r = placement.replicas()[node];
      if (std::adjacent_find(r.begin(), r.end()) != r.end()) problems.push_back("duplicate replica on a node");
      for (std::size_t pos : r) {
        if (placement.owner(pos) == node) problems.push_back("node holds a replica of its own triple");
      }
    }
  }
  return problems;
}

}  // namespace lbsd
