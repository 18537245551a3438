// Copyright 2026 The phasekit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace phasekit {

inline constexpr const char* kLibraryName = "phasekit";
inline constexpr const char* kLibraryVersion = "1.0.0";

/// Missing value, written as `null` in both CSV and JSON.
struct Null {
  friend bool operator==(Null, Null) = default;
};

using Cell = std::variant<Null, double, std::int64_t, std::string>;

/// Column-named rows plus free-form metadata.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    return columns.size();
  }
};

/// Finite doubles with 12 significant digits; NaN and infinities become null.
inline std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string format_cell(const Cell& c) {
  struct {
    std::string operator()(Null) const { return "null"; }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& s) const { return s; }
  } visitor;
  return std::visit(visitor, c);
}

/// Header row, then one line per row; every line newline-terminated.
inline void write_csv(const Table& t, std::ostream& out) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_cell(row[i]);
    out << '\n';
  }
}

inline nlohmann::ordered_json cell_to_json(const Cell& c) {
  struct {
    nlohmann::ordered_json operator()(Null) const { return nullptr; }
    nlohmann::ordered_json operator()(double v) const {
      if (!std::isfinite(v)) return nullptr;
      // Same 12 significant digits as the CSV.
      return std::stod(format_number(v));
    }
    nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
  } visitor;
  return std::visit(visitor, c);
}

/// {"metadata": {...}, "rows": [{column: value, ...}, ...]}
inline nlohmann::ordered_json to_json(const Table& t) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json meta = t.metadata;
  meta["library"] = kLibraryName;
  meta["version"] = kLibraryVersion;
  doc["metadata"] = std::move(meta);
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i)
      obj[t.columns[i]] = cell_to_json(row[i]);
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

inline void write_json(const Table& t, std::ostream& out) {
  out << to_json(t).dump(2) << '\n';
}

}  // namespace phasekit
