// Copyright 2026 The LBSD Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lbsd/error.hpp"
#include "lbsd/triple_store.hpp"

namespace lbsd {

using SubjectFrequencyTable = std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>>;

/// Out-degree of every subject, counted in one pass over the triples.
inline SubjectFrequencyTable subject_frequencies(const TripleStore& store) {
  SubjectFrequencyTable table;
  for (const auto& t : store.triples()) {
    auto it = table.find(std::string_view(t.subject));
    if (it == table.end()) table.emplace(t.subject, 1);
    else ++it->second;
  }
  return table;
}

/// The k subjects with the most outgoing triples, ordered by count
/// descending and then by subject ascending.
inline std::vector<std::string> extract_popular_subjects(const TripleStore& store, std::size_t k) {
  if (k == 0) throw PreconditionError("k must be at least 1");

  std::vector<std::size_t> counts(store.resource_count(), 0);
  for (std::size_t pos = 0; pos < store.size(); ++pos) ++counts[store.subject_id(pos)];

  std::vector<TermId> subjects;
  for (TermId id = 0; id < counts.size(); ++id) {
    if (counts[id] > 0) subjects.push_back(id);
  }
  if (subjects.size() < k) {
    throw PreconditionError("requested " + std::to_string(k) + " popular subjects but the store has only " +
                            std::to_string(subjects.size()) + " distinct subjects");
  }
  auto by_rank = [&](TermId a, TermId b) {
    if (counts[a] != counts[b]) return counts[a] > counts[b];
    return store.resource(a) < store.resource(b);
  };
  std::partial_sort(subjects.begin(), subjects.begin() + static_cast<std::ptrdiff_t>(k), subjects.end(), by_rank);

  std::vector<std::string> top;
  top.reserve(k);
  for (std::size_t i = 0; i < k; ++i) top.push_back(store.resource(subjects[i]));
  return top;
}

struct Fragment {
  std::size_t id = 0;
  std::string master;
  /// Ascending triple positions.
  PositionList members;
  /// Resource objects of member triples with their multiplicity.
  std::unordered_map<std::string, std::size_t> object_frequency;

  std::size_t size() const noexcept { return members.size(); }
};

struct PartitionResult {
  std::vector<Fragment> fragments;
  /// Triples placed by the smallest-fragment fallback.
  std::size_t orphan_count = 0;
  /// Fragment id of every triple position.
  std::vector<std::size_t> fragment_of;

  std::size_t k() const noexcept { return fragments.size(); }
};

enum class GrowthMode {
  /// Keep growing until no pending subject group scores above zero.
  Fixpoint,
  /// Score each pending group once, in store order.
  SinglePass,
};

namespace detail {

class FragmentGrower {
 public:
  FragmentGrower(const TripleStore& store, std::size_t k, GrowthMode mode)
      : store_(store), mode_(mode), state_(store.resource_count(), kNotSubject), frequency_(k), members_(k) {
    for (const auto& s : store.subjects_in_order()) state_[store.find_resource(s)] = kPending;
  }

  void seed(std::size_t fragment, TermId subject) { assign(subject, fragment); }

  void grow() {
    for (const auto& s : store_.subjects_in_order()) try_place(store_.find_resource(s));
    if (mode_ == GrowthMode::Fixpoint) drain();
  }

  std::size_t place_orphans() {
    std::size_t orphans = 0;
    for (const auto& s : store_.subjects_in_order()) {
      TermId id = store_.find_resource(s);
      if (state_[id] != kPending) continue;
      std::size_t smallest = 0;
      for (std::size_t f = 1; f < members_.size(); ++f) {
        if (members_[f].size() < members_[smallest].size()) smallest = f;
      }
      orphans += store_.with_subject(s).size();
      assign(id, smallest);
      if (mode_ == GrowthMode::Fixpoint) drain();
    }
    return orphans;
  }

  PartitionResult finish(std::span<const std::string> masters, std::size_t orphans) {
    PartitionResult result;
    result.orphan_count = orphans;
    result.fragment_of.assign(store_.size(), 0);
    result.fragments.resize(members_.size());
    for (std::size_t f = 0; f < members_.size(); ++f) {
      Fragment& frag = result.fragments[f];
      frag.id = f;
      frag.master = masters[f];
      frag.members = std::move(members_[f]);
      std::sort(frag.members.begin(), frag.members.end());
      for (std::size_t pos : frag.members) result.fragment_of[pos] = f;
      frag.object_frequency.reserve(frequency_[f].size());
      for (const auto& [obj, count] : frequency_[f]) frag.object_frequency.emplace(store_.resource(obj), count);
    }
    return result;
  }

 private:
  static constexpr std::uint32_t kNotSubject = 0xFFFFFFFFu;
  static constexpr std::uint32_t kPending = 0xFFFFFFFEu;

  void assign(TermId subject, std::size_t fragment) {
    state_[subject] = static_cast<std::uint32_t>(fragment);
    for (std::size_t pos : store_.with_subject(store_.resource(subject))) {
      members_[fragment].push_back(pos);
      TermId obj = store_.object_id(pos);
      if (obj == kNoTerm) continue;
      ++frequency_[fragment][obj];
      if (state_[obj] == kPending) dirty_.push_back(obj);
    }
  }

  void try_place(TermId subject) {
    if (state_[subject] != kPending) return;
    std::size_t best = 0;
    std::size_t best_score = 0;
    for (std::size_t f = 0; f < frequency_.size(); ++f) {
      auto it = frequency_[f].find(subject);
      if (it != frequency_[f].end() && it->second > best_score) {
        best_score = it->second;
        best = f;
      }
    }
    if (best_score > 0) assign(subject, best);
  }

  void drain() {
    while (!dirty_.empty()) {
      TermId next = dirty_.front();
      dirty_.pop_front();
      try_place(next);
    }
  }

  const TripleStore& store_;
  GrowthMode mode_;
  std::vector<std::uint32_t> state_;  // fragment id, kPending or kNotSubject per resource
  std::vector<std::unordered_map<TermId, std::size_t>> frequency_;
  std::vector<PositionList> members_;
  std::deque<TermId> dirty_;
};

}  // namespace detail

/// Builds one fragment per master subject and grows them by object/subject
/// closeness.
///
/// Fragment i starts with every triple of masters[i]. A pending subject group
/// then joins the fragment holding it most often as an object (ties go to the
/// lower fragment id), bringing all triples of that subject along. Groups no
/// fragment references go to the smallest fragment; in Fixpoint mode growth
/// resumes from each such placement.
inline PartitionResult grow_fragments(const TripleStore& store, std::span<const std::string> masters,
                                      GrowthMode mode = GrowthMode::Fixpoint) {
  if (masters.empty()) throw PreconditionError("at least one master subject is required");
  std::vector<TermId> ids;
  ids.reserve(masters.size());
  for (const auto& m : masters) {
    TermId id = store.find_resource(m);
    if (id == kNoTerm || store.with_subject(m).empty()) {
      throw PreconditionError("master '" + m + "' is not a subject in the store");
    }
    if (std::find(ids.begin(), ids.end(), id) != ids.end()) {
      throw PreconditionError("master '" + m + "' listed twice");
    }
    ids.push_back(id);
  }

  detail::FragmentGrower grower(store, masters.size(), mode);
  for (std::size_t f = 0; f < ids.size(); ++f) grower.seed(f, ids[f]);
  grower.grow();
  std::size_t orphans = grower.place_orphans();
  return grower.finish(masters, orphans);
}

}  // namespace lbsd
