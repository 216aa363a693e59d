// Copyright 2026 The LBSD Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lbsd/error.hpp"

namespace lbsd {

/// A bound value: a resource term or a literal.
struct Value {
  std::string text;
  bool literal = false;

  friend auto operator<=>(const Value&, const Value&) = default;
  friend bool operator==(const Value&, const Value&) = default;
};

/// Constant or variable in one position of a triple pattern.
struct Term {
  enum class Kind { Variable, Resource, Literal };

  Kind kind = Kind::Variable;
  std::string text;  // variable name without '?', or the constant

  static Term var(std::string name) { return {Kind::Variable, std::move(name)}; }
  static Term resource(std::string iri) { return {Kind::Resource, std::move(iri)}; }
  static Term literal(std::string text) { return {Kind::Literal, std::move(text)}; }

  bool is_variable() const noexcept { return kind == Kind::Variable; }
  Value value() const { return {text, kind == Kind::Literal}; }

  friend bool operator==(const Term&, const Term&) = default;
};

struct TriplePattern {
  Term subject;
  Term predicate;
  Term object;
  /// Required to allow a pattern made of three variables.
  bool full_scan = false;

  friend bool operator==(const TriplePattern&, const TriplePattern&) = default;
};

enum class QueryType { Linear, Star, Range, Snowflake };

inline std::string_view to_string(QueryType t) {
  switch (t) {
    case QueryType::Linear: return "linear";
    case QueryType::Star: return "star";
    case QueryType::Range: return "range";
    case QueryType::Snowflake: return "snowflake";
  }
  return "unknown";
}

inline QueryType query_type_from_string(std::string_view s) {
  if (s == "linear") return QueryType::Linear;
  if (s == "star") return QueryType::Star;
  if (s == "range") return QueryType::Range;
  if (s == "snowflake") return QueryType::Snowflake;
  throw PreconditionError("unknown query type '" + std::string(s) + "'");
}

/// Inclusive numeric bounds on the objects of triples carrying `predicate`.
struct RangeFilter {
  std::string predicate;
  double lower = 0.0;
  double upper = 0.0;

  friend bool operator==(const RangeFilter&, const RangeFilter&) = default;
};

enum class Aggregate { None, Count };

struct QueryPattern {
  QueryType type = QueryType::Star;
  std::vector<TriplePattern> patterns;
  std::optional<RangeFilter> filter;
  Aggregate aggregate = Aggregate::None;

  friend bool operator==(const QueryPattern&, const QueryPattern&) = default;
};

inline std::optional<double> parse_number(std::string_view text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) return std::nullopt;
  return v;
}

/// Checks the shape rules of each query type; throws PreconditionError.
///
/// Linear: pattern i's object variable is pattern i+1's subject variable.
/// Star: every pattern has the same subject term.
/// Range: a single pattern plus a filter; COUNT is only allowed here.
/// Snowflake: at least two patterns on the center (the first pattern's
/// subject) and at least one chained pattern whose subject variable is an
/// object variable of an earlier pattern.
inline void validate(const QueryPattern& q) {
  if (q.patterns.empty()) throw PreconditionError("query has no patterns");
  for (const auto& p : q.patterns) {
    if (p.subject.kind == Term::Kind::Literal) throw PreconditionError("literal in subject position");
    if (p.predicate.kind == Term::Kind::Literal) throw PreconditionError("literal in predicate position");
    if (p.subject.is_variable() && p.predicate.is_variable() && p.object.is_variable() && !p.full_scan) {
      throw PreconditionError("pattern has no constant and is not marked as a full scan");
    }
  }
  if (q.type != QueryType::Range && (q.filter || q.aggregate != Aggregate::None)) {
    throw PreconditionError("filters and aggregates are only valid on range queries");
  }
  switch (q.type) {
    case QueryType::Linear:
      for (std::size_t i = 0; i + 1 < q.patterns.size(); ++i) {
        const Term& o = q.patterns[i].object;
        const Term& s = q.patterns[i + 1].subject;
        if (!o.is_variable() || !s.is_variable() || o.text != s.text) {
          throw PreconditionError("linear query patterns do not chain at pattern " + std::to_string(i + 1));
        }
      }
      break;
    case QueryType::Star:
      for (const auto& p : q.patterns) {
        if (!(p.subject == q.patterns.front().subject)) throw PreconditionError("star patterns must share a subject");
      }
      break;
    case QueryType::Range:
      if (q.patterns.size() != 1) throw PreconditionError("range query takes exactly one pattern");
      if (!q.filter) throw PreconditionError("range query needs a filter");
      if (!(q.filter->lower <= q.filter->upper)) throw PreconditionError("range filter lower bound exceeds upper");
      break;
    case QueryType::Snowflake: {
      const Term& center = q.patterns.front().subject;
      std::size_t arms = 0;
      std::size_t chained = 0;
      std::vector<std::string> object_vars;
      for (const auto& p : q.patterns) {
        if (p.subject == center) {
          ++arms;
        } else if (p.subject.is_variable() &&
                   std::find(object_vars.begin(), object_vars.end(), p.subject.text) != object_vars.end()) {
          ++chained;
        } else {
          throw PreconditionError("snowflake pattern is neither on the center nor chained");
        }
        if (p.object.is_variable()) object_vars.push_back(p.object.text);
      }
      if (arms < 2 || chained < 1) throw PreconditionError("snowflake needs two center arms and a chain");
      break;
    }
  }
}

}  // namespace lbsd
