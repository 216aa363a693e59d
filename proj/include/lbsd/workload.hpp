// Copyright 2026 The LBSD Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lbsd/error.hpp"
#include "lbsd/query.hpp"
#include "lbsd/random.hpp"
#include "lbsd/triple_store.hpp"

namespace lbsd {

/// Queries per type, in the order linear, star, range, snowflake.
struct WorkloadMix {
  std::size_t linear = 3;
  std::size_t star = 4;
  std::size_t range = 3;
  std::size_t snowflake = 2;

  std::size_t total() const noexcept { return linear + star + range + snowflake; }
};

namespace detail {

class WorkloadBuilder {
 public:
  WorkloadBuilder(const TripleStore& store, std::uint64_t seed) : store_(store), rng_(seed) {
    for (std::size_t pos = 0; pos < store.size(); ++pos) {
      const Triple& t = store[pos];
      if (!t.object_is_literal && !store.with_subject(t.object).empty()) chain_links_.push_back(pos);
    }
    for (const auto& [p, positions] : store.predicate_index()) {
      for (std::size_t pos : positions) {
        if (store[pos].object_is_literal && parse_number(store[pos].object)) {
          numeric_predicates_.push_back(p);
          break;
        }
      }
    }
    std::sort(numeric_predicates_.begin(), numeric_predicates_.end());
    for (const auto& s : store.subjects_in_order()) {
      if (distinct_predicates(s).size() >= 2) star_centers_.push_back(s);
    }
    std::set<std::string_view> seen;
    for (std::size_t pos : chain_links_) {
      const std::string& s = store[pos].subject;
      if (seen.insert(s).second && distinct_predicates(s).size() >= 2) snowflake_centers_.push_back(s);
    }
  }

  QueryPattern linear() {
    QueryPattern q;
    q.type = QueryType::Linear;
    if (chain_links_.empty()) {
      const Triple& t = store_[rng_.below(store_.size())];
      q.patterns.push_back({Term::resource(t.subject), Term::resource(t.predicate), Term::var("v1")});
      return q;
    }
    const Triple* t = &store_[chain_links_[rng_.below(chain_links_.size())]];
    q.patterns.push_back({Term::resource(t->subject), Term::resource(t->predicate), Term::var("v1")});
    for (std::size_t depth = 1; depth < 3; ++depth) {
      auto next = store_.with_subject(t->object);
      t = &store_[next[rng_.below(next.size())]];
      q.patterns.push_back({Term::var("v" + std::to_string(depth)), Term::resource(t->predicate),
                            Term::var("v" + std::to_string(depth + 1))});
      if (t->object_is_literal || store_.with_subject(t->object).empty() || rng_.below(2) == 0) break;
    }
    return q;
  }

  QueryPattern star() {
    QueryPattern q;
    q.type = QueryType::Star;
    if (star_centers_.empty()) {
      const Triple& t = store_[rng_.below(store_.size())];
      q.patterns.push_back({Term::resource(t.subject), Term::resource(t.predicate), Term::var("o1")});
      return q;
    }
    const std::string& center = star_centers_[rng_.below(star_centers_.size())];
    std::vector<std::string> preds = distinct_predicates(center);
    rng_.shuffle(std::span<std::string>(preds));
    const std::size_t arms = std::min<std::size_t>(preds.size(), 2 + rng_.below(2));
    std::sort(preds.begin(), preds.begin() + static_cast<std::ptrdiff_t>(arms));
    for (std::size_t i = 0; i < arms; ++i) {
      q.patterns.push_back({Term::resource(center), Term::resource(preds[i]), Term::var("o" + std::to_string(i + 1))});
    }
    return q;
  }

  QueryPattern range() {
    QueryPattern q;
    q.type = QueryType::Range;
    if (numeric_predicates_.empty()) {
      const Triple& t = store_[rng_.below(store_.size())];
      q.patterns.push_back({Term::var("s"), Term::resource(t.predicate), Term::var("v")});
      q.filter = RangeFilter{t.predicate, 0.0, 0.0};
      return q;
    }
    const std::string& p = numeric_predicates_[rng_.below(numeric_predicates_.size())];
    auto positions = store_.with_predicate(p);
    std::array<double, 2> bounds{};
    for (double& b : bounds) {
      for (;;) {
        const Triple& t = store_[positions[rng_.below(positions.size())]];
        if (!t.object_is_literal) continue;
        if (auto v = parse_number(t.object)) {
          b = *v;
          break;
        }
      }
    }
    std::sort(bounds.begin(), bounds.end());
    q.patterns.push_back({Term::var("s"), Term::resource(p), Term::var("v")});
    q.filter = RangeFilter{p, bounds[0], bounds[1]};
    if (rng_.below(2) == 0) q.aggregate = Aggregate::Count;
    return q;
  }

  QueryPattern snowflake() {
    QueryPattern q;
    q.type = QueryType::Snowflake;
    if (snowflake_centers_.empty()) {
      // No resource chain in the data: keep the shape with an open tail.
      const std::string& center = store_[rng_.below(store_.size())].subject;
      std::vector<std::string> preds = distinct_predicates(center);
      q.patterns.push_back({Term::resource(center), Term::resource(preds.front()), Term::var("a")});
      q.patterns.push_back({Term::resource(center), Term::resource(preds.back()), Term::var("x")});
      q.patterns.push_back({Term::var("x"), Term::var("q"), Term::var("y"), true});
      return q;
    }
    const std::string& center = snowflake_centers_[rng_.below(snowflake_centers_.size())];
    std::vector<std::size_t> links;
    for (std::size_t pos : store_.with_subject(center)) {
      const Triple& t = store_[pos];
      if (!t.object_is_literal && !store_.with_subject(t.object).empty()) links.push_back(pos);
    }
    const Triple& link = store_[links[rng_.below(links.size())]];
    std::vector<std::string> others;
    for (const auto& p : distinct_predicates(center)) {
      if (p != link.predicate) others.push_back(p);
    }
    const std::string& arm = others[rng_.below(others.size())];
    auto next = store_.with_subject(link.object);
    const Triple& tail = store_[next[rng_.below(next.size())]];
    q.patterns.push_back({Term::resource(center), Term::resource(arm), Term::var("a")});
    q.patterns.push_back({Term::resource(center), Term::resource(link.predicate), Term::var("x")});
    q.patterns.push_back({Term::var("x"), Term::resource(tail.predicate), Term::var("y")});
    return q;
  }

 private:
  std::vector<std::string> distinct_predicates(std::string_view subject) const {
    std::vector<std::string> preds;
    for (std::size_t pos : store_.with_subject(subject)) preds.push_back(store_[pos].predicate);
    std::sort(preds.begin(), preds.end());
    preds.erase(std::unique(preds.begin(), preds.end()), preds.end());
    return preds;
  }

  const TripleStore& store_;
  Rng rng_;
  std::vector<std::size_t> chain_links_;
  std::vector<std::string> numeric_predicates_;
  std::vector<std::string> star_centers_;
  std::vector<std::string> snowflake_centers_;
};

}  // namespace detail

/// Seeded query mix with constants drawn from the store. Shapes that the
/// data cannot support fall back to the simplest valid query of the same
/// type, so the type histogram always equals `mix`.
inline std::vector<QueryPattern> generate_workload(const TripleStore& store, std::uint64_t seed,
                                                   WorkloadMix mix = {}) {
  if (store.empty()) throw PreconditionError("cannot generate a workload from an empty store");
  detail::WorkloadBuilder builder(store, seed);
  std::vector<QueryPattern> queries;
  queries.reserve(mix.total());
  for (std::size_t i = 0; i < mix.linear; ++i) queries.push_back(builder.linear());
  for (std::size_t i = 0; i < mix.star; ++i) queries.push_back(builder.star());
  for (std::size_t i = 0; i < mix.range; ++i) queries.push_back(builder.range());
  for (std::size_t i = 0; i < mix.snowflake; ++i) queries.push_back(builder.snowflake());
  return queries;
}

// Workload files: terms are strings; "?x" is a variable, "\"text\"" a
// literal, anything else a resource.

inline std::string term_to_json(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Variable: return "?" + t.text;
    case Term::Kind::Literal: return "\"" + t.text + "\"";
    case Term::Kind::Resource: return t.text;
  }
  return t.text;
}

inline Term term_from_json(const std::string& s) {
  if (s.empty()) throw PreconditionError("empty term in workload");
  if (s.front() == '?') return Term::var(s.substr(1));
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return Term::literal(s.substr(1, s.size() - 2));
  return Term::resource(s);
}

inline nlohmann::json workload_to_json(std::span<const QueryPattern> workload) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& q : workload) {
    nlohmann::json jq;
    jq["type"] = std::string(to_string(q.type));
    jq["patterns"] = nlohmann::json::array();
    for (const auto& p : q.patterns) {
      nlohmann::json jp{{"s", term_to_json(p.subject)}, {"p", term_to_json(p.predicate)}, {"o", term_to_json(p.object)}};
      if (p.full_scan) jp["fullScan"] = true;
      jq["patterns"].push_back(std::move(jp));
    }
    if (q.filter) jq["filter"] = {{"predicate", q.filter->predicate}, {"lower", q.filter->lower}, {"upper", q.filter->upper}};
    if (q.aggregate == Aggregate::Count) jq["aggregate"] = "count";
    out.push_back(std::move(jq));
  }
  return out;
}

inline std::vector<QueryPattern> workload_from_json(const nlohmann::json& in) {
  if (!in.is_array()) throw PreconditionError("workload file must hold a JSON array");
  std::vector<QueryPattern> workload;
  try {
    for (const auto& jq : in) {
      QueryPattern q;
      q.type = query_type_from_string(jq.at("type").get<std::string>());
      for (const auto& jp : jq.at("patterns")) {
        TriplePattern p{term_from_json(jp.at("s").get<std::string>()), term_from_json(jp.at("p").get<std::string>()),
                        term_from_json(jp.at("o").get<std::string>()), jp.value("fullScan", false)};
        q.patterns.push_back(std::move(p));
      }
      if (jq.contains("filter")) {
        const auto& f = jq["filter"];
        q.filter = RangeFilter{f.at("predicate").get<std::string>(), f.at("lower").get<double>(),
                               f.at("upper").get<double>()};
      }
      if (jq.contains("aggregate")) {
        auto a = jq["aggregate"].get<std::string>();
        if (a == "count") q.aggregate = Aggregate::Count;
        else if (a != "none") throw PreconditionError("unknown aggregate '" + a + "'");
      }
      validate(q);
      workload.push_back(std::move(q));
    }
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed workload: ") + e.what());
  }
  return workload;
}

}  // namespace lbsd
