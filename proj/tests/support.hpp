// Copyright 2026 The LBSD Authors
// Licensed under the Apache License, Version 2.0

// Shared fixtures for the unit and acceptance suites: a skewed random store
// builder and brute-force reference implementations that share no code with
// the library's indexed paths.

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lbsd/lbsd.hpp"

namespace lbsd::testing {

struct RandomStoreShape {
  std::size_t triples = 500;
  std::size_t subjects = 50;
  std::size_t predicates = 6;
  /// Chance an object is a resource; half of those point at other subjects.
  double resource_objects = 0.5;
};

/// Every subject gets one triple first so the distinct-subject count is
/// exact before duplicates are removed; the rest are drawn with a quadratic
/// skew toward low subject ids, which produces hubs and count ties.
inline TripleStore random_store(Rng& rng, const RandomStoreShape& shape) {
  std::vector<Triple> out;
  out.reserve(shape.triples);
  auto subject = [](std::size_t i) { return "s" + std::to_string(i); };
  auto emit = [&](std::size_t s) {
    Triple t;
    t.subject = subject(s);
    t.predicate = "p" + std::to_string(rng.below(shape.predicates));
    if (rng.unit() < shape.resource_objects) {
      t.object = rng.unit() < 0.5 ? subject(rng.below(shape.subjects)) : "r" + std::to_string(rng.below(shape.subjects));
    } else {
      t.object = std::to_string(rng.below(100));
      t.object_is_literal = true;
    }
    out.push_back(std::move(t));
  };
  for (std::size_t s = 0; s < shape.subjects && out.size() < shape.triples; ++s) emit(s);
  while (out.size() < shape.triples) {
    double u = rng.unit();
    emit(static_cast<std::size_t>(u * u * static_cast<double>(shape.subjects)));
  }
  return TripleStore(std::move(out));
}

/// Full count table sorted by (count desc, subject asc), truncated to k.
inline std::vector<std::string> brute_top_k(const TripleStore& store, std::size_t k) {
  std::map<std::string, std::size_t> counts;
  for (const auto& t : store.triples()) ++counts[t.subject];
  std::vector<std::pair<std::string, std::size_t>> all(counts.begin(), counts.end());
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<std::string> top;
  for (std::size_t i = 0; i < k && i < all.size(); ++i) top.push_back(all[i].first);
  return top;
}

struct BruteDegree {
  std::size_t subjects = 0;
  std::size_t edges = 0;
};

inline std::map<std::string, BruteDegree> brute_degrees(const TripleStore& store) {
  std::map<std::string, std::set<std::string>> seen;
  std::map<std::string, BruteDegree> out;
  for (const auto& t : store.triples()) {
    seen[t.predicate].insert(t.subject);
    ++out[t.predicate].edges;
  }
  for (auto& [p, d] : out) d.subjects = seen[p].size();
  return out;
}

/// Nested-loop evaluation over the raw triple list. Rows use variables in
/// order of first appearance, sorted and distinct, like the library.
inline Bindings brute_evaluate(const TripleStore& store, const QueryPattern& q) {
  Bindings out;
  for (const auto& p : q.patterns) {
    for (const Term* t : {&p.subject, &p.predicate, &p.object}) {
      if (t->is_variable() && std::find(out.variables.begin(), out.variables.end(), t->text) == out.variables.end()) {
        out.variables.push_back(t->text);
      }
    }
  }
  std::set<std::vector<Value>> rows;
  std::map<std::string, Value> env;

  auto unify = [&](const Term& term, const Value& v, std::vector<std::string>& bound_here) {
    if (!term.is_variable()) return term.value() == v;
    auto it = env.find(term.text);
    if (it != env.end()) return it->second == v;
    env.emplace(term.text, v);
    bound_here.push_back(term.text);
    return true;
  };

  auto recurse = [&](auto& self, std::size_t i) -> void {
    if (i == q.patterns.size()) {
      std::vector<Value> row;
      for (const auto& v : out.variables) row.push_back(env.at(v));
      rows.insert(std::move(row));
      return;
    }
    const auto& p = q.patterns[i];
    for (const auto& t : store.triples()) {
      if (q.filter && t.predicate == q.filter->predicate) {
        auto v = parse_number(t.object);
        if (!t.object_is_literal || !v || *v < q.filter->lower || *v > q.filter->upper) continue;
      }
      std::vector<std::string> bound_here;
      bool ok = unify(p.subject, {t.subject, false}, bound_here) &&
                unify(p.predicate, {t.predicate, false}, bound_here) &&
                unify(p.object, {t.object, t.object_is_literal}, bound_here);
      if (ok) self(self, i + 1);
      for (const auto& name : bound_here) env.erase(name);
    }
  };
  recurse(recurse, 0);

  if (q.aggregate == Aggregate::Count) {
    out.variables = {"count"};
    out.rows = {{Value{std::to_string(rows.size()), true}}};
    return out;
  }
  out.rows.assign(rows.begin(), rows.end());
  return out;
}

/// Completeness and cohesion counted without trusting fragment_of.
inline std::size_t partition_violations(const TripleStore& store, const PartitionResult& r) {
  std::size_t violations = 0;
  std::vector<std::size_t> hits(store.size(), 0);
  std::vector<std::size_t> home(store.size(), 0);
  for (const auto& f : r.fragments) {
    for (std::size_t pos : f.members) {
      if (pos >= store.size()) {
        ++violations;
        continue;
      }
      ++hits[pos];
      home[pos] = f.id;
    }
  }
  for (std::size_t h : hits) violations += h == 1 ? 0 : 1;
  std::map<std::string, std::set<std::size_t>> fragments_of_subject;
  for (std::size_t pos = 0; pos < store.size(); ++pos) fragments_of_subject[store[pos].subject].insert(home[pos]);
  for (const auto& [s, frags] : fragments_of_subject) violations += frags.size() == 1 ? 0 : 1;
  return violations;
}

/// Fragment i goes to node i mod m.
inline std::size_t round_robin_max_load(std::span<const std::size_t> sizes, std::size_t m) {
  std::vector<std::size_t> load(m, 0);
  for (std::size_t i = 0; i < sizes.size(); ++i) load[i % m] += sizes[i];
  return *std::max_element(load.begin(), load.end());
}

inline TripleStore make_store(std::initializer_list<Triple> triples) { return TripleStore(std::vector<Triple>(triples)); }

inline Triple res(std::string s, std::string p, std::string o) { return {std::move(s), std::move(p), std::move(o), false}; }
inline Triple lit(std::string s, std::string p, std::string o) { return {std::move(s), std::move(p), std::move(o), true}; }

}  // namespace lbsd::testing
