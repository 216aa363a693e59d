// Copyright 2026 The LBSD Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "lbsd/allocator.hpp"
#include "lbsd/error.hpp"
#include "lbsd/query.hpp"
#include "lbsd/triple_store.hpp"

namespace lbsd {

/// Result rows in variable order of first appearance; sorted and distinct.
struct Bindings {
  std::vector<std::string> variables;
  std::vector<std::vector<Value>> rows;

  friend bool operator==(const Bindings&, const Bindings&) = default;
};

/// Cost charged per extra node a query has to reach, in scanned-triple units.
inline constexpr double kHopPenalty = 100.0;

struct QueryMetrics {
  std::size_t nodes_touched = 1;
  bool locally_answered = true;
  std::size_t joins = 0;
  std::size_t triples_scanned = 0;
  /// Execution-time proxy: busiest node's scan count plus kHopPenalty per
  /// remote node involved.
  double qet_proxy = 0.0;
};

struct QueryResult {
  Bindings bindings;
  QueryMetrics metrics;
};

namespace detail {

/// Fixed values of a pattern after substituting bound variables; null = free.
struct Probe {
  const Value* subject = nullptr;
  const Value* predicate = nullptr;
  const Value* object = nullptr;
};

inline bool matches(const Triple& t, const Probe& probe) {
  if (probe.subject && (probe.subject->literal || t.subject != probe.subject->text)) return false;
  if (probe.predicate && (probe.predicate->literal || t.predicate != probe.predicate->text)) return false;
  if (probe.object && (t.object_is_literal != probe.object->literal || t.object != probe.object->text)) return false;
  return true;
}

/// Index lookup for one probe. Calls on_match(position) per matching triple
/// and returns the number of candidate triples examined.
template <typename OnMatch>
std::size_t match_in_store(const TripleStore& store, const Probe& probe, OnMatch&& on_match) {
  auto scan = [&](std::span<const std::size_t> candidates) {
    for (std::size_t pos : candidates) {
      if (matches(store[pos], probe)) on_match(pos);
    }
    return candidates.size();
  };
  if (probe.subject) {
    if (probe.subject->literal) return 0;
    return scan(store.with_subject(probe.subject->text));
  }
  if (probe.object && !probe.object->literal) return scan(store.with_object(probe.object->text));
  if (probe.predicate) {
    if (probe.predicate->literal) return 0;
    return scan(store.with_predicate(probe.predicate->text));
  }
  for (std::size_t pos = 0; pos < store.size(); ++pos) {
    if (matches(store[pos], probe)) on_match(pos);
  }
  return store.size();
}

using Matcher = std::function<void(const Probe&, std::vector<const Triple*>&)>;

inline bool passes_filter(const Triple& t, const std::optional<RangeFilter>& filter) {
  if (!filter || t.predicate != filter->predicate) return true;
  if (!t.object_is_literal) return false;
  auto v = parse_number(t.object);
  return v && *v >= filter->lower && *v <= filter->upper;
}

/// Pattern-at-a-time evaluation. Rows produced so far are grouped by the
/// values of the variables the next pattern shares with them (a hash join
/// keyed on shared variables); each group probes the data once.
inline Bindings run_query(const QueryPattern& q, const Matcher& matcher) {
  Bindings out;
  std::unordered_map<std::string, std::size_t> slot_of;
  auto slot = [&](const Term& t) {
    auto [it, inserted] = slot_of.try_emplace(t.text, out.variables.size());
    if (inserted) out.variables.push_back(t.text);
    return it->second;
  };

  std::vector<std::vector<Value>> rows(1);
  std::size_t bound = 0;
  std::vector<const Triple*> found;
  for (const auto& pattern : q.patterns) {
    const Term* terms[3] = {&pattern.subject, &pattern.predicate, &pattern.object};
    // For each position: constant (-1), bound slot (< bound) or new slot.
    long slots[3];
    for (int i = 0; i < 3; ++i) slots[i] = terms[i]->is_variable() ? static_cast<long>(slot(*terms[i])) : -1;
    const std::size_t now_bound = out.variables.size();
    Value constants[3];
    for (int i = 0; i < 3; ++i) {
      if (slots[i] < 0) constants[i] = terms[i]->value();
    }

    std::map<std::vector<Value>, std::vector<std::size_t>> groups;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      std::vector<Value> key;
      for (long s : slots) {
        if (s >= 0 && static_cast<std::size_t>(s) < bound) key.push_back(rows[r][static_cast<std::size_t>(s)]);
      }
      groups[std::move(key)].push_back(r);
    }

    std::vector<std::vector<Value>> next;
    for (const auto& [key, members] : groups) {
      Probe probe;
      const Value* fixed[3] = {nullptr, nullptr, nullptr};
      std::size_t k = 0;
      for (int i = 0; i < 3; ++i) {
        if (slots[i] < 0) fixed[i] = &constants[i];
        else if (static_cast<std::size_t>(slots[i]) < bound) fixed[i] = &key[k++];
      }
      probe.subject = fixed[0];
      probe.predicate = fixed[1];
      probe.object = fixed[2];
      found.clear();
      matcher(probe, found);

      for (const Triple* t : found) {
        if (!passes_filter(*t, q.filter)) continue;
        Value values[3] = {{t->subject, false}, {t->predicate, false}, {t->object, t->object_is_literal}};
        std::vector<Value> fresh(now_bound - bound);
        std::vector<bool> set(now_bound - bound, false);
        bool consistent = true;
        for (int i = 0; i < 3 && consistent; ++i) {
          if (slots[i] < 0 || static_cast<std::size_t>(slots[i]) < bound) continue;
          std::size_t f = static_cast<std::size_t>(slots[i]) - bound;
          if (set[f] && !(fresh[f] == values[i])) consistent = false;
          fresh[f] = values[i];
          set[f] = true;
        }
        if (!consistent) continue;
        for (std::size_t r : members) {
          std::vector<Value> row;
          row.reserve(now_bound);
          row = rows[r];
          row.insert(row.end(), fresh.begin(), fresh.end());
          next.push_back(std::move(row));
        }
      }
    }
    rows = std::move(next);
    bound = now_bound;
    if (rows.empty()) break;
  }

  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  if (q.aggregate == Aggregate::Count) {
    out.variables = {"count"};
    out.rows = {{Value{std::to_string(rows.size()), true}}};
    return out;
  }
  out.rows = std::move(rows);
  return out;
}

inline std::size_t logical_joins(const QueryPattern& q) { return q.patterns.empty() ? 0 : q.patterns.size() - 1; }

}  // namespace detail

/// Reference evaluation against the whole store on a single node.
inline QueryResult evaluate_centralized(const TripleStore& store, const QueryPattern& q) {
  validate(q);
  QueryResult result;
  std::size_t scanned = 0;
  result.bindings = detail::run_query(q, [&](const detail::Probe& probe, std::vector<const Triple*>& out) {
    scanned += detail::match_in_store(store, probe, [&](std::size_t pos) { out.push_back(&store[pos]); });
  });
  result.metrics.joins = detail::logical_joins(q);
  result.metrics.triples_scanned = scanned;
  result.metrics.qet_proxy = static_cast<double>(scanned);
  return result;
}

/// Simulated deployment: every node holds its own indexed store of the
/// triples it owns plus its replicas.
class Cluster {
 public:
  struct Node {
    TripleStore data;
    std::vector<std::size_t> global;  // local position -> store position
    std::vector<bool> owned;
  };

  Cluster(const TripleStore& store, Placement placement) : store_(&store), placement_(std::move(placement)) {
    if (placement_.triple_count() != store.size()) throw PreconditionError("placement does not cover the store");
    nodes_.resize(placement_.node_count());
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
      std::vector<Triple> local;
      for (std::size_t pos = 0; pos < store.size(); ++pos) {
        if (!placement_.visible(n, pos)) continue;
        local.push_back(store[pos]);
        nodes_[n].global.push_back(pos);
        nodes_[n].owned.push_back(placement_.owner(pos) == n);
      }
      nodes_[n].data = TripleStore(std::move(local));
    }
  }

  const TripleStore& store() const noexcept { return *store_; }
  const Placement& placement() const noexcept { return placement_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  const Node& node(std::size_t n) const { return nodes_.at(n); }

 private:
  const TripleStore* store_;
  Placement placement_;
  std::vector<Node> nodes_;
};

/// Evaluates `q` starting at `home`. The home node answers from everything
/// it holds; each other node answers only from triples it owns that the home
/// node lacks. `nodes_touched` counts the home node plus every node that
/// supplied such a triple.
inline QueryResult evaluate_distributed(const Cluster& cluster, const QueryPattern& q, std::size_t home) {
  validate(q);
  if (home >= cluster.node_count()) throw PreconditionError("home node out of range");
  const TripleStore& store = cluster.store();
  const Placement& placement = cluster.placement();
  const std::size_t m = cluster.node_count();
  std::vector<std::size_t> scanned(m, 0);
  std::vector<bool> touched(m, false);
  touched[home] = true;

  QueryResult result;
  result.bindings = detail::run_query(q, [&](const detail::Probe& probe, std::vector<const Triple*>& out) {
    const auto& local = cluster.node(home);
    scanned[home] += detail::match_in_store(local.data, probe,
                                            [&](std::size_t lpos) { out.push_back(&store[local.global[lpos]]); });
    for (std::size_t r = 0; r < m; ++r) {
      if (r == home) continue;
      const auto& remote = cluster.node(r);
      scanned[r] += detail::match_in_store(remote.data, probe, [&](std::size_t lpos) {
        if (!remote.owned[lpos]) return;
        std::size_t pos = remote.global[lpos];
        if (placement.visible(home, pos)) return;
        out.push_back(&store[pos]);
        touched[r] = true;
      });
    }
  });

  const auto& local = cluster.node(home);
  Bindings home_only = detail::run_query(q, [&](const detail::Probe& probe, std::vector<const Triple*>& out) {
    detail::match_in_store(local.data, probe, [&](std::size_t lpos) { out.push_back(&local.data[lpos]); });
  });

  auto& m_out = result.metrics;
  m_out.locally_answered = home_only == result.bindings;
  m_out.nodes_touched = static_cast<std::size_t>(std::count(touched.begin(), touched.end(), true));
  m_out.joins = detail::logical_joins(q);
  for (std::size_t s : scanned) m_out.triples_scanned += s;
  m_out.qet_proxy = static_cast<double>(*std::max_element(scanned.begin(), scanned.end())) +
                    kHopPenalty * static_cast<double>(m_out.nodes_touched - 1);
  return result;
}

enum class RoutingPolicy {
  /// Route each query to the node that answers it with the least remote work.
  BestCase,
  Fixed,
};

struct QueryOutcome {
  QueryType type = QueryType::Star;
  std::size_t home = 0;
  std::size_t rows = 0;
  QueryMetrics metrics;
  double centralized_qet_proxy = 0.0;
};

struct IncSummary {
  double fraction_local = 0.0;
  double mean_nodes_touched = 0.0;
  double mean_joins = 0.0;
  double mean_triples_scanned = 0.0;
  double mean_qet_proxy = 0.0;
  double mean_centralized_qet_proxy = 0.0;
  std::vector<QueryOutcome> queries;
};

inline QueryOutcome route_query(const Cluster& cluster, const QueryPattern& q, RoutingPolicy policy,
                                std::size_t fixed_home) {
  QueryOutcome best;
  bool have = false;
  auto better = [](const QueryMetrics& a, const QueryMetrics& b) {
    if (a.locally_answered != b.locally_answered) return a.locally_answered;
    return a.nodes_touched < b.nodes_touched;
  };
  std::size_t first = policy == RoutingPolicy::Fixed ? fixed_home : 0;
  std::size_t last = policy == RoutingPolicy::Fixed ? fixed_home + 1 : cluster.node_count();
  for (std::size_t home = first; home < last; ++home) {
    QueryResult r = evaluate_distributed(cluster, q, home);
    if (!have || better(r.metrics, best.metrics)) {
      best.home = home;
      best.rows = r.bindings.rows.size();
      best.metrics = r.metrics;
      have = true;
    }
  }
  best.type = q.type;
  best.centralized_qet_proxy = evaluate_centralized(cluster.store(), q).metrics.qet_proxy;
  return best;
}

/// Inter-node communication summary over a workload. Best-case routing
/// prefers a home node that answers locally, then fewer nodes touched, then
/// the lower node id. Queries are independent, so `threads` > 1 evaluates
/// them in parallel with identical results.
inline IncSummary inc_report(const Cluster& cluster, std::span<const QueryPattern> workload,
                             RoutingPolicy policy = RoutingPolicy::BestCase, std::size_t fixed_home = 0,
                             std::size_t threads = 1) {
  if (workload.empty()) throw PreconditionError("workload is empty");
  if (fixed_home >= cluster.node_count()) throw PreconditionError("home node out of range");
  IncSummary summary;
  summary.queries.resize(workload.size());
  threads = std::clamp<std::size_t>(threads, 1, workload.size());
  if (threads == 1) {
    for (std::size_t i = 0; i < workload.size(); ++i) {
      summary.queries[i] = route_query(cluster, workload[i], policy, fixed_home);
    }
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < workload.size(); i += threads) {
          summary.queries[i] = route_query(cluster, workload[i], policy, fixed_home);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  const double count = static_cast<double>(workload.size());
  for (const auto& q : summary.queries) {
    summary.fraction_local += q.metrics.locally_answered ? 1.0 : 0.0;
    summary.mean_nodes_touched += static_cast<double>(q.metrics.nodes_touched);
    summary.mean_joins += static_cast<double>(q.metrics.joins);
    summary.mean_triples_scanned += static_cast<double>(q.metrics.triples_scanned);
    summary.mean_qet_proxy += q.metrics.qet_proxy;
    summary.mean_centralized_qet_proxy += q.centralized_qet_proxy;
  }
  summary.fraction_local /= count;
  summary.mean_nodes_touched /= count;
  summary.mean_joins /= count;
  summary.mean_triples_scanned /= count;
  summary.mean_qet_proxy /= count;
  summary.mean_centralized_qet_proxy /= count;
  return summary;
}

}  // namespace lbsd
