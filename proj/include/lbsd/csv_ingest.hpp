// Copyright 2026 The LBSD Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lbsd/error.hpp"
#include "lbsd/triple_store.hpp"

namespace lbsd {

struct ColumnMapping {
  std::string predicate;
  std::string column;
  /// false turns the cell value into a resource term instead of a literal.
  bool literal = true;
};

/// Which CSV column names the subject and which columns become objects.
struct CsvMapping {
  std::string subject_column;
  std::vector<ColumnMapping> objects;
  /// Prepended to subject cell values (and resource-valued object cells).
  std::string resource_prefix;
};

struct CsvIngestResult {
  TripleStore store;
  std::size_t rows = 0;
  std::size_t skipped_cells = 0;
};

namespace detail {

/// Splits one CSV record (RFC 4180 quoting) that may span several physical
/// lines. Returns false at end of input.
inline bool read_csv_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line_no) {
  fields.clear();
  std::string line;
  if (!std::getline(in, line)) return false;
  ++line_no;
  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  for (;;) {
    if (i >= line.size()) {
      if (quoted) {
        std::string next;
        if (!std::getline(in, next)) throw IngestError("unterminated quoted field at line " + std::to_string(line_no));
        ++line_no;
        field.push_back('\n');
        line = std::move(next);
        i = 0;
        continue;
      }
      break;
    }
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          i += 2;
          continue;
        }
        quoted = false;
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r' || i + 1 != line.size()) {
      field.push_back(c);
    }
    ++i;
  }
  fields.push_back(std::move(field));
  return true;
}

}  // namespace detail

/// Converts a header-led CSV table into triples: one triple per row per
/// mapped column. Empty object cells are skipped and counted; rows with an
/// empty subject cell contribute nothing and count each mapped cell as skipped.
inline CsvIngestResult ingest_csv(std::istream& in, const CsvMapping& mapping) {
  if (mapping.subject_column.empty() || mapping.objects.empty()) {
    throw IngestError("mapping needs a subject column and at least one object column");
  }
  std::vector<std::string> header;
  std::size_t line_no = 0;
  CsvIngestResult result;
  if (!detail::read_csv_record(in, header, line_no)) return result;

  std::unordered_map<std::string, std::size_t> column_of;
  for (std::size_t i = 0; i < header.size(); ++i) column_of.emplace(header[i], i);
  auto require = [&](const std::string& name) {
    auto it = column_of.find(name);
    if (it == column_of.end()) throw IngestError("mapped column '" + name + "' not found in CSV header");
    return it->second;
  };
  const std::size_t subject_col = require(mapping.subject_column);
  std::vector<std::size_t> object_cols;
  for (const auto& m : mapping.objects) {
    if (m.predicate.empty()) throw IngestError("empty predicate for column '" + m.column + "'");
    object_cols.push_back(require(m.column));
  }

  std::vector<Triple> triples;
  std::vector<std::string> row;
  while (detail::read_csv_record(in, row, line_no)) {
    if (row.size() == 1 && row[0].empty()) continue;
    ++result.rows;
    auto cell = [&row](std::size_t col) -> std::string_view {
      return col < row.size() ? std::string_view(row[col]) : std::string_view();
    };
    std::string_view subject = cell(subject_col);
    for (std::size_t j = 0; j < object_cols.size(); ++j) {
      std::string_view value = cell(object_cols[j]);
      if (subject.empty() || value.empty()) {
        ++result.skipped_cells;
        continue;
      }
      const auto& m = mapping.objects[j];
      Triple t;
      t.subject = mapping.resource_prefix + std::string(subject);
      t.predicate = m.predicate;
      t.object_is_literal = m.literal;
      t.object = m.literal ? std::string(value) : mapping.resource_prefix + std::string(value);
      triples.push_back(std::move(t));
    }
  }
  result.store = TripleStore(std::move(triples));
  return result;
}

}  // namespace lbsd
