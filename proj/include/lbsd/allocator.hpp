// Copyright 2026 The LBSD Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "lbsd/error.hpp"
#include "lbsd/partitioner.hpp"

namespace lbsd {

struct NodeAssignment {
  std::size_t node_id = 0;
  std::vector<std::size_t> fragment_ids;
  std::size_t load = 0;  // triples
};

struct AllocationPlan {
  std::vector<NodeAssignment> nodes;

  std::size_t m() const noexcept { return nodes.size(); }

  std::size_t max_load() const {
    std::size_t v = 0;
    for (const auto& n : nodes) v = std::max(v, n.load);
    return v;
  }
  std::size_t min_load() const {
    if (nodes.empty()) return 0;
    std::size_t v = nodes.front().load;
    for (const auto& n : nodes) v = std::min(v, n.load);
    return v;
  }
};

inline std::vector<std::size_t> fragment_sizes(const PartitionResult& partition) {
  std::vector<std::size_t> sizes;
  sizes.reserve(partition.k());
  for (const auto& f : partition.fragments) sizes.push_back(f.size());
  return sizes;
}

/// Largest-first greedy placement: fragments in descending size (ties by id)
/// each go to the node with the smallest current load (ties by node id).
inline AllocationPlan allocate(std::span<const std::size_t> fragment_sizes, std::size_t m) {
  if (m == 0) throw PreconditionError("node count must be at least 1");

  std::vector<std::size_t> order(fragment_sizes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return fragment_sizes[a] > fragment_sizes[b]; });

  AllocationPlan plan;
  plan.nodes.resize(m);
  for (std::size_t i = 0; i < m; ++i) plan.nodes[i].node_id = i;

  using Slot = std::pair<std::size_t, std::size_t>;  // (load, node id)
  std::priority_queue<Slot, std::vector<Slot>, std::greater<>> lightest;
  for (std::size_t i = 0; i < m; ++i) lightest.emplace(0, i);

  for (std::size_t frag : order) {
    auto [load, node] = lightest.top();
    lightest.pop();
    plan.nodes[node].fragment_ids.push_back(frag);
    plan.nodes[node].load = load + fragment_sizes[frag];
    lightest.emplace(plan.nodes[node].load, node);
  }
  return plan;
}

/// Which node owns each triple, plus the replica copies each node holds.
/// Replica lists never contain a triple the node already owns.
class Placement {
 public:
  Placement() = default;
  Placement(std::size_t nodes, std::vector<std::uint32_t> owner)
      : nodes_(nodes), owner_(std::move(owner)), replicas_(nodes) {}

  std::size_t node_count() const noexcept { return nodes_; }
  std::size_t triple_count() const noexcept { return owner_.size(); }
  std::uint32_t owner(std::size_t pos) const { return owner_[pos]; }
  const std::vector<std::uint32_t>& owners() const noexcept { return owner_; }
  const std::vector<PositionList>& replicas() const noexcept { return replicas_; }

  bool has_replica(std::size_t node, std::size_t pos) const {
    return !replica_mask_.empty() && replica_mask_[node][pos];
  }
  bool visible(std::size_t node, std::size_t pos) const { return owner_[pos] == node || has_replica(node, pos); }

  /// Replaces the replica sets. Each list is sorted and deduplicated; owned
  /// positions are dropped.
  void set_replicas(std::vector<PositionList> replicas) {
    if (replicas.size() != nodes_) throw PreconditionError("replica list count differs from node count");
    replica_mask_.assign(nodes_, std::vector<bool>(owner_.size(), false));
    for (std::size_t node = 0; node < nodes_; ++node) {
      auto& list = replicas[node];
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
      std::erase_if(list, [&](std::size_t pos) {
        if (pos >= owner_.size()) throw PreconditionError("replica position out of range");
        return owner_[pos] == node;
      });
      for (std::size_t pos : list) replica_mask_[node][pos] = true;
    }
    replicas_ = std::move(replicas);
  }

  std::size_t replica_copies() const {
    std::size_t total = 0;
    for (const auto& r : replicas_) total += r.size();
    return total;
  }

 private:
  std::size_t nodes_ = 0;
  std::vector<std::uint32_t> owner_;
  std::vector<PositionList> replicas_;
  std::vector<std::vector<bool>> replica_mask_;
};

/// Ownership map for a partition placed by `allocation`.
inline Placement place(const PartitionResult& partition, const AllocationPlan& allocation) {
  std::vector<std::uint32_t> node_of_fragment(partition.k(), 0);
  for (const auto& node : allocation.nodes) {
    for (std::size_t f : node.fragment_ids) node_of_fragment.at(f) = static_cast<std::uint32_t>(node.node_id);
  }
  std::vector<std::uint32_t> owner(partition.fragment_of.size());
  for (std::size_t pos = 0; pos < owner.size(); ++pos) owner[pos] = node_of_fragment[partition.fragment_of[pos]];
  return Placement(allocation.m(), std::move(owner));
}

/// Baseline that ignores graph structure: triple i lives on node i mod m.
inline Placement round_robin_placement(std::size_t triples, std::size_t m) {
  if (m == 0) throw PreconditionError("node count must be at least 1");
  std::vector<std::uint32_t> owner(triples);
  for (std::size_t pos = 0; pos < triples; ++pos) owner[pos] = static_cast<std::uint32_t>(pos % m);
  return Placement(m, std::move(owner));
}

}  // namespace lbsd
