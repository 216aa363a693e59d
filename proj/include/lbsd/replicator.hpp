// Copyright 2026 The LBSD Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lbsd/allocator.hpp"
#include "lbsd/error.hpp"
#include "lbsd/triple_store.hpp"

namespace lbsd {

struct PredicateDegree {
  std::size_t distinct_subjects = 0;
  std::size_t edges = 0;
  double centrality = 0.0;
};

/// Per-predicate degree centrality: distinct subjects using the predicate
/// divided by the number of edges carrying it. Always in (0, 1].
struct CentralityTable {
  std::map<std::string, PredicateDegree, std::less<>> entries;

  double centrality(std::string_view predicate) const {
    auto it = entries.find(predicate);
    if (it == entries.end()) throw PreconditionError("unknown predicate '" + std::string(predicate) + "'");
    return it->second.centrality;
  }
};

inline CentralityTable compute_centrality(const TripleStore& store) {
  if (store.empty()) throw PreconditionError("centrality of an empty store is undefined");
  CentralityTable table;
  // stamp[s] == bucket number marks subject s as already counted for the bucket
  std::vector<std::size_t> stamp(store.resource_count(), 0);
  std::size_t bucket = 0;
  for (const auto& [predicate, positions] : store.predicate_index()) {
    ++bucket;
    PredicateDegree d;
    d.edges = positions.size();
    for (std::size_t pos : positions) {
      TermId s = store.subject_id(pos);
      if (stamp[s] != bucket) {
        stamp[s] = bucket;
        ++d.distinct_subjects;
      }
    }
    d.centrality = static_cast<double>(d.distinct_subjects) / static_cast<double>(d.edges);
    table.entries.emplace(predicate, d);
  }
  return table;
}

/// CSV with header `predicate,distinct_subjects,edge_count,centrality`.
inline void write_centrality_csv(std::ostream& out, const CentralityTable& table) {
  out << "predicate,distinct_subjects,edge_count,centrality\n";
  for (const auto& [p, d] : table.entries) {
    bool quote = p.find_first_of(",\"\n") != std::string::npos;
    if (quote) {
      out << '"';
      for (char c : p) {
        if (c == '"') out << '"';
        out << c;
      }
      out << '"';
    } else {
      out << p;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", d.centrality);
    out << ',' << d.distinct_subjects << ',' << d.edges << ',' << buf << '\n';
  }
}

inline void validate_threshold(double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw PreconditionError("threshold must lie in (0, 1], got " + std::to_string(threshold));
  }
}

/// Replication cut-off. With an override, returns it. Otherwise it is the
/// centrality of the predicate occurring most often among the triples of the
/// top subjects (ties by predicate name).
inline double derive_threshold(const CentralityTable& table, const TripleStore& store,
                               std::span<const std::string> top_subjects,
                               std::optional<double> override_value = std::nullopt) {
  if (override_value) {
    validate_threshold(*override_value);
    return *override_value;
  }
  if (top_subjects.empty()) throw PreconditionError("no top subjects to derive a threshold from");
  std::map<std::string_view, std::size_t> occurrences;
  for (const auto& s : top_subjects) {
    for (std::size_t pos : store.with_subject(s)) ++occurrences[store[pos].predicate];
  }
  if (occurrences.empty()) throw PreconditionError("top subjects have no triples");
  auto best = occurrences.begin();
  for (auto it = occurrences.begin(); it != occurrences.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return table.centrality(best->first);
}

enum class ThresholdMode {
  /// centrality >= threshold qualifies
  Inclusive,
  /// centrality > threshold qualifies
  Strict,
};

struct ReplicationDecision {
  double threshold = 1.0;
  std::set<std::string, std::less<>> replicated_predicates;
  /// Ascending positions of every triple copied to the nodes that do not own it.
  PositionList replicated_positions;
  /// replicated_positions.size() / store size
  double replication_level = 0.0;
  /// Copies actually shipped (one per triple per non-owning node).
  std::size_t replica_copies = 0;
};

struct ReplicationOutcome {
  ReplicationDecision decision;
  Placement placement;
};

/// Copies every triple whose predicate qualifies under `threshold` to every
/// node except its owner.
inline ReplicationOutcome replicate(const Placement& placement, const CentralityTable& table, double threshold,
                                    const TripleStore& store, ThresholdMode mode = ThresholdMode::Inclusive) {
  validate_threshold(threshold);
  if (placement.triple_count() != store.size()) throw PreconditionError("placement does not cover the store");

  ReplicationOutcome out;
  out.decision.threshold = threshold;
  for (const auto& [p, d] : table.entries) {
    bool qualifies = mode == ThresholdMode::Strict ? d.centrality > threshold : d.centrality >= threshold;
    if (qualifies) out.decision.replicated_predicates.insert(p);
  }

  std::vector<PositionList> replicas(placement.node_count());
  for (const auto& p : out.decision.replicated_predicates) {
    for (std::size_t pos : store.with_predicate(p)) out.decision.replicated_positions.push_back(pos);
  }
  std::sort(out.decision.replicated_positions.begin(), out.decision.replicated_positions.end());
  for (std::size_t pos : out.decision.replicated_positions) {
    for (std::size_t node = 0; node < placement.node_count(); ++node) {
      if (placement.owner(pos) != node) replicas[node].push_back(pos);
    }
  }
  out.decision.replication_level =
      store.empty() ? 0.0
                    : static_cast<double>(out.decision.replicated_positions.size()) / static_cast<double>(store.size());
  out.placement = placement;
  out.placement.set_replicas(std::move(replicas));
  out.decision.replica_copies = out.placement.replica_copies();
  return out;
}

}  // namespace lbsd
