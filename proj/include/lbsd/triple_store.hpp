// Copyright 2026 The LBSD Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "lbsd/error.hpp"

namespace lbsd {

/// One RDF statement. Resource terms are stored without angle brackets.
struct Triple {
  std::string subject;
  std::string predicate;
  std::string object;
  bool object_is_literal = false;

  friend bool operator==(const Triple&, const Triple&) = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    std::hash<std::string_view> h;
    std::size_t seed = h(t.subject);
    auto mix = [&seed](std::size_t v) { seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2); };
    mix(h(t.predicate));
    mix(h(t.object));
    mix(static_cast<std::size_t>(t.object_is_literal));
    return seed;
  }
};

/// Transparent hash so maps keyed by std::string accept string_view lookups.
struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
};

using PositionList = std::vector<std::size_t>;
using TermIndex = std::unordered_map<std::string, PositionList, StringHash, std::equal_to<>>;

/// Dense id of a resource term (any subject or non-literal object).
using TermId = std::uint32_t;
inline constexpr TermId kNoTerm = std::numeric_limits<TermId>::max();

/// Immutable, indexed collection of distinct triples.
///
/// Construction removes exact duplicates (first occurrence wins) and builds
/// subject/object/predicate indices. Literal objects are never indexed in the
/// object index. Positions are stable for the life of the store.
class TripleStore {
 public:
  TripleStore() = default;

  explicit TripleStore(std::vector<Triple> triples) {
    std::unordered_set<Triple, TripleHash> seen;
    seen.reserve(triples.size());
    triples_.reserve(triples.size());
    for (auto& t : triples) {
      if (t.subject.empty() || t.predicate.empty()) {
        throw PreconditionError("triple with empty subject or predicate");
      }
      if (seen.insert(t).second) {
        triples_.push_back(std::move(t));
      } else {
        ++duplicates_removed_;
      }
    }
    build_indices();
  }

  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }
  std::size_t duplicates_removed() const noexcept { return duplicates_removed_; }

  const std::vector<Triple>& triples() const noexcept { return triples_; }
  const Triple& operator[](std::size_t pos) const { return triples_[pos]; }

  const TermIndex& subject_index() const noexcept { return subject_index_; }
  const TermIndex& object_index() const noexcept { return object_index_; }
  const TermIndex& predicate_index() const noexcept { return predicate_index_; }

  std::span<const std::size_t> with_subject(std::string_view s) const { return lookup(subject_index_, s); }
  std::span<const std::size_t> with_object(std::string_view o) const { return lookup(object_index_, o); }
  std::span<const std::size_t> with_predicate(std::string_view p) const { return lookup(predicate_index_, p); }

  /// Distinct subjects in order of first appearance.
  const std::vector<std::string>& subjects_in_order() const noexcept { return subject_order_; }

  std::size_t resource_count() const noexcept { return resources_.size(); }
  const std::string& resource(TermId id) const { return resources_[id]; }
  TermId subject_id(std::size_t pos) const { return subject_ids_[pos]; }
  /// kNoTerm for literal objects.
  TermId object_id(std::size_t pos) const { return object_ids_[pos]; }
  TermId find_resource(std::string_view term) const {
    auto it = resource_ids_.find(term);
    return it == resource_ids_.end() ? kNoTerm : it->second;
  }

 private:
  static std::span<const std::size_t> lookup(const TermIndex& index, std::string_view key) {
    auto it = index.find(key);
    if (it == index.end()) return {};
    return it->second;
  }

  TermId intern(const std::string& term) {
    auto [it, inserted] = resource_ids_.try_emplace(term, static_cast<TermId>(resources_.size()));
    if (inserted) resources_.push_back(term);
    return it->second;
  }

  void build_indices() {
    subject_ids_.reserve(triples_.size());
    object_ids_.reserve(triples_.size());
    for (std::size_t pos = 0; pos < triples_.size(); ++pos) {
      const Triple& t = triples_[pos];
      auto& bucket = subject_index_[t.subject];
      if (bucket.empty()) subject_order_.push_back(t.subject);
      bucket.push_back(pos);
      predicate_index_[t.predicate].push_back(pos);
      subject_ids_.push_back(intern(t.subject));
      if (t.object_is_literal) {
        object_ids_.push_back(kNoTerm);
      } else {
        object_index_[t.object].push_back(pos);
        object_ids_.push_back(intern(t.object));
      }
    }
  }

  std::vector<Triple> triples_;
  std::size_t duplicates_removed_ = 0;
  TermIndex subject_index_;
  TermIndex object_index_;
  TermIndex predicate_index_;
  std::vector<std::string> subject_order_;
  std::vector<std::string> resources_;
  std::unordered_map<std::string, TermId, StringHash, std::equal_to<>> resource_ids_;
  std::vector<TermId> subject_ids_;
  std::vector<TermId> object_ids_;
};

namespace detail {

inline void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

class LineScanner {
 public:
  LineScanner(std::string_view line, std::size_t line_no) : s_(line), line_no_(line_no) {}

  void skip_ws() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t' || s_[i_] == '\r')) ++i_;
  }
  bool at_end() const { return i_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[i_]; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(line_no_, what + " (column " + std::to_string(i_ + 1) + ")");
  }

  /// Reads `<iri>` or `_:label`; returns the bare term.
  std::string resource(const char* role) {
    skip_ws();
    if (peek() == '<') {
      ++i_;
      std::string out;
      while (!at_end() && s_[i_] != '>') {
        char c = s_[i_];
        if (c == ' ' || c == '\t') fail(std::string("whitespace inside IRI of ") + role);
        if (c == '\\') {
          out.append(unicode_escape());
          continue;
        }
        out.push_back(c);
        ++i_;
      }
      if (at_end()) fail(std::string("unterminated IRI in ") + role);
      ++i_;
      if (out.empty()) fail(std::string("empty IRI in ") + role);
      return out;
    }
    if (s_.substr(i_, 2) == "_:") {
      std::size_t start = i_;
      i_ += 2;
      while (!at_end() && s_[i_] != ' ' && s_[i_] != '\t' && s_[i_] != '.') ++i_;
      if (i_ == start + 2) fail(std::string("empty blank node label in ") + role);
      return std::string(s_.substr(start, i_ - start));
    }
    fail(std::string("expected IRI or blank node for ") + role);
  }

  std::string literal() {
    ++i_;  // opening quote
    std::string out;
    while (!at_end() && s_[i_] != '"') {
      char c = s_[i_];
      if (c != '\\') {
        out.push_back(c);
        ++i_;
        continue;
      }
      if (i_ + 1 >= s_.size()) fail("dangling escape in literal");
      char e = s_[i_ + 1];
      switch (e) {
        case 't': out.push_back('\t'); i_ += 2; break;
        case 'n': out.push_back('\n'); i_ += 2; break;
        case 'r': out.push_back('\r'); i_ += 2; break;
        case 'b': out.push_back('\b'); i_ += 2; break;
        case 'f': out.push_back('\f'); i_ += 2; break;
        case '"': out.push_back('"'); i_ += 2; break;
        case '\'': out.push_back('\''); i_ += 2; break;
        case '\\': out.push_back('\\'); i_ += 2; break;
        default: out.append(unicode_escape());
      }
    }
    if (at_end()) fail("unterminated literal");
    ++i_;
    if (peek() == '^' || peek() == '@') fail("datatype and language tags are not supported");
    return out;
  }

  /// Parses `\uXXXX` or `\UXXXXXXXX` at the cursor.
  std::string unicode_escape() {
    std::size_t digits = 0;
    if (s_.substr(i_, 2) == "\\u") digits = 4;
    else if (s_.substr(i_, 2) == "\\U") digits = 8;
    else fail("unsupported escape sequence");
    if (i_ + 2 + digits > s_.size()) fail("truncated unicode escape");
    std::uint32_t cp = 0;
    for (std::size_t k = 0; k < digits; ++k) {
      char h = s_[i_ + 2 + k];
      cp <<= 4;
      if (h >= '0' && h <= '9') cp |= static_cast<std::uint32_t>(h - '0');
      else if (h >= 'a' && h <= 'f') cp |= static_cast<std::uint32_t>(h - 'a' + 10);
      else if (h >= 'A' && h <= 'F') cp |= static_cast<std::uint32_t>(h - 'A' + 10);
      else fail("bad hex digit in unicode escape");
    }
    if (cp > 0x10FFFF) fail("unicode escape out of range");
    i_ += 2 + digits;
    std::string out;
    append_utf8(out, cp);
    return out;
  }

  void advance() { ++i_; }

 private:
  std::string_view s_;
  std::size_t line_no_;
  std::size_t i_ = 0;
};

inline bool needs_iri_escape(unsigned char c) {
  return c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
         c == '`' || c == '\\';
}

inline void append_uchar(std::ostream& out, unsigned char c) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  out << "\\u00" << kHex[c >> 4] << kHex[c & 0xF];
}

inline void write_resource(std::ostream& out, std::string_view term) {
  out << '<';
  for (char ch : term) {
    auto c = static_cast<unsigned char>(ch);
    if (needs_iri_escape(c)) append_uchar(out, c);
    else out << ch;
  }
  out << '>';
}

inline void write_literal(std::ostream& out, std::string_view text) {
  out << '"';
  for (char ch : text) {
    switch (ch) {
      case '"': out << "\\\""; break;
      case '\\': out << "\\\\"; break;
      case '\n': out << "\\n"; break;
      case '\r': out << "\\r"; break;
      case '\t': out << "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) append_uchar(out, static_cast<unsigned char>(ch));
        else out << ch;
    }
  }
  out << '"';
}

inline Triple parse_statement(std::string_view line, std::size_t line_no) {
  LineScanner sc(line, line_no);
  Triple t;
  t.subject = sc.resource("subject");
  t.predicate = sc.resource("predicate");
  sc.skip_ws();
  if (sc.peek() == '"') {
    t.object = sc.literal();
    t.object_is_literal = true;
  } else {
    t.object = sc.resource("object");
  }
  sc.skip_ws();
  // N-Quads graph label: accepted and dropped.
  if (sc.peek() == '<' || sc.peek() == '_') (void)sc.resource("graph label");
  sc.skip_ws();
  if (sc.peek() != '.') sc.fail("expected '.' terminating the statement");
  sc.advance();
  sc.skip_ws();
  if (!sc.at_end() && sc.peek() != '#') sc.fail("trailing characters after '.'");
  return t;
}

}  // namespace detail

/// Parses line-oriented N-Triples. Blank and `#` lines are skipped; a fourth
/// (graph) term is ignored. Exact duplicate statements are dropped.
inline TripleStore parse_ntriples(std::istream& in) {
  std::vector<Triple> triples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view v(line);
    std::size_t first = v.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || v[first] == '#') continue;
    triples.push_back(detail::parse_statement(v, line_no));
  }
  return TripleStore(std::move(triples));
}

inline TripleStore parse_ntriples(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_ntriples(in);
}

inline void write_triple(std::ostream& out, const Triple& t) {
  detail::write_resource(out, t.subject);
  out << ' ';
  detail::write_resource(out, t.predicate);
  out << ' ';
  if (t.object_is_literal) detail::write_literal(out, t.object);
  else detail::write_resource(out, t.object);
  out << " .\n";
}

/// Canonical serialization: one statement per line in store order. Line i
/// (0-based) holds the triple at position i.
inline void serialize_ntriples(std::ostream& out, const TripleStore& store) {
  for (const auto& t : store.triples()) write_triple(out, t);
}

inline std::string serialize_ntriples(const TripleStore& store) {
  std::ostringstream out;
  serialize_ntriples(out, store);
  return out.str();
}

}  // namespace lbsd
