// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ionrep Authors

#include "cli_output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace cli {

Format parse_format(const std::string& name) {
  if (name == "text") return Format::Text;
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  throw config_error("output.format: must be text, json or csv");
}

std::string fmt9(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

Json num9(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(fmt9(v).c_str(), nullptr);
}

std::string cell(const Json& value) {
  if (value.is_null()) return "nan";
  if (value.is_string()) return value.get<std::string>();
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  if (value.is_number_integer()) return value.dump();
  if (value.is_number()) return fmt9(value.get<double>());
  if (value.is_array()) {
    std::string s;
    for (const auto& e : value) {
      if (!s.empty()) s += ';';
      s += cell(e);
    }
    return s;
  }
  return value.dump();
}

Json json_envelope(const std::string& command) {
  return Json{{"spec_version", ionrep_version()}, {"command", command}};
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

} // namespace

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << csv_field(table.columns[i]);
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(cell(row[i]));
    out << '\n';
  }
}

void write_record(std::ostream& out, Format format, const std::string& command, const Record& record) {
  switch (format) {
  case Format::Json: {
    Json doc = json_envelope(command);
    Json result = Json::object();
    for (const auto& [k, v] : record) result[k] = v;
    doc["result"] = std::move(result);
    out << doc.dump(2) << '\n';
    break;
  }
  case Format::Csv: {
    Table t;
    std::vector<Json> row;
    for (const auto& [k, v] : record) {
      t.columns.push_back(k);
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
    write_csv(out, t);
    break;
  }
  case Format::Text: {
    std::size_t width = 0;
    for (const auto& kv : record) width = std::max(width, kv.first.size());
    for (const auto& [k, v] : record) out << k << std::string(width - k.size() + 2, ' ') << cell(v) << '\n';
    break;
  }
  }
}

void write_table(std::ostream& out, Format format, const std::string& command, const Table& table) {
  switch (format) {
  case Format::Json: {
    Json doc = json_envelope(command);
    Json rows = Json::array();
    for (const auto& r : table.rows) {
      Json obj = Json::object();
      for (std::size_t i = 0; i < r.size(); ++i) obj[table.columns[i]] = r[i];
      rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
    break;
  }
  case Format::Csv:
    write_csv(out, table);
    break;
  case Format::Text: {
    std::vector<std::size_t> width(table.columns.size());
    std::vector<std::vector<std::string>> cells;
    for (std::size_t i = 0; i < table.columns.size(); ++i) width[i] = table.columns[i].size();
    for (const auto& r : table.rows) {
      auto& line = cells.emplace_back();
      for (std::size_t i = 0; i < r.size(); ++i) {
        line.push_back(cell(r[i]));
        width[i] = std::max(width[i], line.back().size());
      }
    }
    auto emit = [&](const std::vector<std::string>& line) {
      for (std::size_t i = 0; i < line.size(); ++i) {
        out << line[i];
        if (i + 1 < line.size()) out << std::string(width[i] - line[i].size() + 2, ' ');
      }
      out << '\n';
    };
    emit(table.columns);
    for (const auto& line : cells) emit(line);
    break;
  }
  }
}

} // namespace cli
