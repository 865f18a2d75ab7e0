#pragma once

// CurveTable: a labelled, rectangular table whose first column is a strictly
// increasing abscissa. CSV and JSON writers live here too.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "forest_sense/errors.hpp"

namespace forest_sense {

struct CurveTable {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  CurveTable() = default;
  CurveTable(std::string title_, std::vector<std::string> columns_)
      : title(std::move(title_)), columns(std::move(columns_)) {}

  void add_row(std::vector<double> row) {
    if (row.size() != columns.size()) {
      throw DomainError("row has " + std::to_string(row.size()) + " values, table has " +
                        std::to_string(columns.size()) + " columns");
    }
    if (!rows.empty() && !(row.front() > rows.back().front())) {
      throw DomainError("abscissa must be strictly increasing");
    }
    rows.push_back(std::move(row));
  }

  std::size_t column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    throw DomainError("no column named '" + name + "'");
  }

  std::vector<double> column(std::size_t index) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row.at(index));
    return out;
  }

  std::vector<double> column(const std::string& name) const { return column(column_index(name)); }

  std::vector<double> abscissa() const { return column(std::size_t{0}); }
};

namespace table_io {

/// Nine significant digits; non-finite values as inf / -inf / nan.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline void write_csv(std::ostream& os, const CurveTable& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) os << ',';
    os << table.columns[i];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << format_number(row[i]);
    }
    os << '\n';
  }
}

// Several tables: each block is preceded by "# <title>" and separated by a blank line.
inline void write_csv(std::ostream& os, std::span<const CurveTable> tables) {
  if (tables.size() == 1) {
    write_csv(os, tables.front());
    return;
  }
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (i) os << '\n';
    os << "# " << tables[i].title << '\n';
    write_csv(os, tables[i]);
  }
}

inline nlohmann::json json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return std::stod(format_number(v));
}

inline nlohmann::json to_json(const CurveTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (double v : row) r.push_back(json_number(v));
    rows.push_back(std::move(r));
  }
  return {{"columns", table.columns}, {"rows", std::move(rows)}};
}

inline nlohmann::json to_json(std::span<const CurveTable> tables) {
  if (tables.size() == 1) return to_json(tables.front());
  nlohmann::json list = nlohmann::json::array();
  for (const auto& t : tables) {
    auto obj = to_json(t);
    obj["title"] = t.title;
    list.push_back(std::move(obj));
  }
  return {{"tables", std::move(list)}};
}

inline void write_json(std::ostream& os, std::span<const CurveTable> tables) {
  os << to_json(tables).dump(2) << '\n';
}

}  // namespace table_io
}  // namespace forest_sense
