// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ionrep Authors

#pragma once

#include "cli_config.hpp"

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace cli {

enum class Format { Text, Json, Csv };

Format parse_format(const std::string& name);

/// Decimal with 9 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string fmt9(double v);

/// JSON number rounded to 9 significant digits, null when non-finite.
Json num9(double v);

/// Ordered key/value record; values are JSON scalars or arrays of scalars.
using Record = std::vector<std::pair<std::string, Json>>;

/// Header row plus data rows, all rows sharing the header's keys.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

/// Scalar as text/CSV cell. Arrays are joined with ';', null is "nan".
std::string cell(const Json& value);

void write_record(std::ostream& out, Format format, const std::string& command, const Record& record);
void write_table(std::ostream& out, Format format, const std::string& command, const Table& table);
void write_csv(std::ostream& out, const Table& table);

/// Top-level JSON object shared by every command.
Json json_envelope(const std::string& command);

} // namespace cli
