// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ionrep Authors

#pragma once

#include "ionrep/ionrep.h"
#include "json.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitInfeasible = 3,
  kExitValidation = 4,
};

/// Error that terminates the command with a specific exit code.
class CommandError : public std::runtime_error {
public:
  CommandError(int code, const std::string& what, Json detail = Json::object())
      : std::runtime_error(what), code_(code), detail_(std::move(detail)) {}
  int code() const noexcept { return code_; }
  /// Extra machine-readable fields for the JSON error object.
  const Json& detail() const noexcept { return detail_; }

private:
  int code_;
  Json detail_;
};

inline CommandError config_error(const std::string& what) { return CommandError(kExitConfig, what); }

/// Fully populated configuration with every documented default.
Json default_config();

/// Rejects unknown sections/keys and wrongly typed values, naming the path.
void check_schema(const Json& doc);

/// Parses and schema-checks a JSON config file.
Json load_config_file(const std::string& path);

/// Overlays `overlay` (already schema-checked) onto `base` key by key.
void merge_config(Json& base, const Json& overlay);

/// Config path for a library field name, e.g. "tau_g" -> "hardware.tau_g_us".
std::string field_path(const std::string& field);

/// Converts a library error ("field: reason") to "path: reason".
std::string describe_library_error(const char* message);

/// Raises the CommandError matching a non-OK status.
[[noreturn]] void raise_status(ionrep_status status);

inline void check(ionrep_status status) {
  if (status != IONREP_OK) raise_status(status);
}

struct ProfileDeleter {
  void operator()(ionrep_profile* p) const { ionrep_profile_destroy(p); }
};
using Profile = std::unique_ptr<ionrep_profile, ProfileDeleter>;

Profile make_profile(const Json& cfg);
ionrep_layout make_layout(const Json& cfg);
ionrep_bounds make_bounds(const Json& cfg);
ionrep_constraints make_constraints(const Json& cfg);
std::vector<double> sweep_distances(const Json& cfg);

} // namespace cli
