// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ionrep Authors

#include "cli_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

namespace cli {

namespace {

enum class Kind { Number, Integer, OptNumber, OptInteger, NumberList, String };

using Section = std::vector<std::pair<std::string, Kind>>;

const std::vector<std::pair<std::string, Section>>& schema() {
  static const std::vector<std::pair<std::string, Section>> s{
      {"hardware",
       {{"eta_c", Kind::Number},
        {"eta_d", Kind::Number},
        {"alpha_db_per_km", Kind::Number},
        {"refractive_index", Kind::Number},
        {"tau_us", Kind::Number},
        {"tau_g_us", Kind::Number},
        {"tau_o_us", Kind::Number},
        {"tau_m_us", Kind::Number},
        {"f0", Kind::Number},
        {"eps_g", Kind::Number},
        {"memory_margin", Kind::Number}}},
      {"layout",
       {{"L_km", Kind::Number},
        {"n", Kind::Integer},
        {"M", Kind::Integer},
        {"m", Kind::Integer},
        {"l0_km", Kind::OptNumber}}},
      {"sweep",
       {{"L_km", Kind::NumberList}, {"start_km", Kind::Number}, {"stop_km", Kind::Number}, {"step_km", Kind::Number}}},
      {"constraints",
       {{"n_o_max", Kind::OptInteger},
        {"n_m_max", Kind::OptInteger},
        {"fixed_l0_km", Kind::OptNumber},
        {"fixed_n", Kind::OptInteger},
        {"tau_min_us", Kind::OptNumber}}},
      {"bounds", {{"n_max", Kind::Integer}, {"m_max", Kind::Integer}}},
      {"simulation",
       {{"blocks", Kind::Integer},
        {"seed", Kind::Integer},
        {"p_override", Kind::OptNumber},
        {"n_comm_ions", Kind::Integer},
        {"n_mem_ions", Kind::Integer},
        {"trace_blocks", Kind::Integer},
        {"sigma", Kind::Number}}},
      {"output", {{"format", Kind::String}}},
  };
  return s;
}

const Section* find_section(const std::string& name) {
  for (const auto& [key, sec] : schema())
    if (key == name) return &sec;
  return nullptr;
}

bool kind_matches(const Json& v, Kind k) {
  switch (k) {
  case Kind::Number:
    return v.is_number();
  case Kind::Integer:
    return v.is_number_integer();
  case Kind::OptNumber:
    return v.is_null() || v.is_number();
  case Kind::OptInteger:
    return v.is_null() || v.is_number_integer();
  case Kind::NumberList:
    if (v.is_null()) return true;
    if (!v.is_array()) return false;
    for (const auto& e : v)
      if (!e.is_number()) return false;
    return true;
  case Kind::String:
    return v.is_string();
  }
  return false;
}

const char* kind_name(Kind k) {
  switch (k) {
  case Kind::Number: return "a number";
  case Kind::Integer: return "an integer";
  case Kind::OptNumber: return "a number or null";
  case Kind::OptInteger: return "an integer or null";
  case Kind::NumberList: return "an array of numbers or null";
  case Kind::String: return "a string";
  }
  return "?";
}

double us(const Json& v) { return v.get<double>() * 1e-6; }

} // namespace

Json default_config() {
  return Json{
      {"hardware",
       {{"eta_c", 0.3},
        {"eta_d", 0.8},
        {"alpha_db_per_km", 0.2},
        {"refractive_index", 1.47},
        {"tau_us", 1.0},
        {"tau_g_us", 1.0},
        {"tau_o_us", 50.0},
        {"tau_m_us", 60e6},
        {"f0", 1.0 - 1e-4},
        {"eps_g", 1e-4},
        {"memory_margin", 10.0}}},
      {"layout", {{"L_km", 150.0}, {"n", 87}, {"M", 10}, {"m", 22}, {"l0_km", nullptr}}},
      {"sweep", {{"L_km", nullptr}, {"start_km", 10.0}, {"stop_km", 500.0}, {"step_km", 10.0}}},
      {"constraints",
       {{"n_o_max", nullptr}, {"n_m_max", nullptr}, {"fixed_l0_km", nullptr}, {"fixed_n", nullptr},
        {"tau_min_us", nullptr}}},
      {"bounds", {{"n_max", 600}, {"m_max", 2000}}},
      {"simulation",
       {{"blocks", 10000},
        {"seed", 1},
        {"p_override", nullptr},
        {"n_comm_ions", 0},
        {"n_mem_ions", 0},
        {"trace_blocks", 1},
        {"sigma", 3.0}}},
      {"output", {{"format", "text"}}},
  };
}

void check_schema(const Json& doc) {
  if (!doc.is_object()) throw config_error("config: top level must be a JSON object");
  for (const auto& [name, section] : doc.items()) {
    const Section* sec = find_section(name);
    if (!sec) throw config_error(name + ": unknown key");
    if (!section.is_object()) throw config_error(name + ": must be an object");
    for (const auto& [key, value] : section.items()) {
      const auto it = std::find_if(sec->begin(), sec->end(), [&](const auto& e) { return e.first == key; });
      if (it == sec->end()) throw config_error(name + "." + key + ": unknown key");
      if (!kind_matches(value, it->second))
        throw config_error(name + "." + key + ": must be " + kind_name(it->second));
    }
  }
  if (doc.contains("output") && doc["output"].contains("format")) {
    const auto f = doc["output"]["format"].get<std::string>();
    if (f != "text" && f != "json" && f != "csv") throw config_error("output.format: must be text, json or csv");
  }
}

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error(path + ": cannot open config file");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw config_error(path + ": invalid JSON: " + e.what());
  }
  check_schema(doc);
  return doc;
}

void merge_config(Json& base, const Json& overlay) {
  for (const auto& [name, section] : overlay.items())
    for (const auto& [key, value] : section.items()) base[name][key] = value;
}

std::string field_path(const std::string& field) {
  static const std::map<std::string, std::string> paths{
      {"eta_c", "hardware.eta_c"},
      {"eta_d", "hardware.eta_d"},
      {"alpha_db_per_km", "hardware.alpha_db_per_km"},
      {"refractive_index", "hardware.refractive_index"},
      {"tau", "hardware.tau_us"},
      {"tau_g", "hardware.tau_g_us"},
      {"tau_o", "hardware.tau_o_us"},
      {"tau_m", "hardware.tau_m_us"},
      {"f0", "hardware.f0"},
      {"eps_g", "hardware.eps_g"},
      {"memory_margin", "hardware.memory_margin"},
      {"L_km", "layout.L_km"},
      {"n", "layout.n"},
      {"M", "layout.M"},
      {"m", "layout.m"},
      {"L_list", "sweep.L_km"},
      {"n_o_max", "constraints.n_o_max"},
      {"n_m_max", "constraints.n_m_max"},
      {"fixed_l0_km", "constraints.fixed_l0_km"},
      {"fixed_n", "constraints.fixed_n"},
      {"tau_min", "constraints.tau_min_us"},
      {"n_max", "bounds.n_max"},
      {"m_max", "bounds.m_max"},
      {"blocks", "simulation.blocks"},
      {"p_override", "simulation.p_override"},
      {"n_comm_ions", "simulation.n_comm_ions"},
      {"n_mem_ions", "simulation.n_mem_ions"},
      {"trace_blocks", "simulation.trace_blocks"},
  };
  const auto it = paths.find(field);
  return it == paths.end() ? field : it->second;
}

std::string describe_library_error(const char* message) {
  const std::string msg = message ? message : "";
  const auto colon = msg.find(": ");
  if (colon == std::string::npos) return msg;
  return field_path(msg.substr(0, colon)) + msg.substr(colon);
}

void raise_status(ionrep_status status) {
  const std::string msg = describe_library_error(ionrep_last_error());
  switch (status) {
  case IONREP_ERR_PARAMETER:
  case IONREP_ERR_UNKNOWN_KEY:
    throw CommandError(kExitConfig, msg);
  case IONREP_ERR_FEASIBILITY:
  case IONREP_ERR_INFEASIBLE:
    throw CommandError(kExitInfeasible, msg);
  default:
    throw CommandError(kExitInternal, std::string(ionrep_status_name(status)) + ": " + msg);
  }
}

Profile make_profile(const Json& cfg) {
  Profile p(ionrep_profile_create());
  if (!p) throw CommandError(kExitInternal, "out of memory");
  const Json& hw = cfg.at("hardware");
  check(ionrep_profile_set(p.get(), "eta_c", hw.at("eta_c").get<double>()));
  check(ionrep_profile_set(p.get(), "eta_d", hw.at("eta_d").get<double>()));
  check(ionrep_profile_set(p.get(), "alpha_db_per_km", hw.at("alpha_db_per_km").get<double>()));
  check(ionrep_profile_set(p.get(), "refractive_index", hw.at("refractive_index").get<double>()));
  check(ionrep_profile_set(p.get(), "tau", us(hw.at("tau_us"))));
  check(ionrep_profile_set(p.get(), "tau_g", us(hw.at("tau_g_us"))));
  check(ionrep_profile_set(p.get(), "tau_o", us(hw.at("tau_o_us"))));
  check(ionrep_profile_set(p.get(), "tau_m", us(hw.at("tau_m_us"))));
  check(ionrep_profile_set(p.get(), "f0", hw.at("f0").get<double>()));
  check(ionrep_profile_set(p.get(), "eps_g", hw.at("eps_g").get<double>()));
  check(ionrep_profile_set(p.get(), "memory_margin", hw.at("memory_margin").get<double>()));
  check(ionrep_profile_validate(p.get()));
  return p;
}

ionrep_layout make_layout(const Json& cfg) {
  const Json& l = cfg.at("layout");
  return ionrep_layout{l.at("L_km").get<double>(), l.at("n").get<std::int64_t>(), l.at("M").get<std::int64_t>(),
                       l.at("m").get<std::int64_t>()};
}

ionrep_bounds make_bounds(const Json& cfg) {
  const Json& b = cfg.at("bounds");
  return ionrep_bounds{b.at("n_max").get<std::int64_t>(), b.at("m_max").get<std::int64_t>()};
}

ionrep_constraints make_constraints(const Json& cfg) {
  ionrep_constraints c;
  ionrep_constraints_none(&c);
  const Json& j = cfg.at("constraints");
  if (!j.at("n_o_max").is_null()) {
    c.has_n_o_max = 1;
    c.n_o_max = j["n_o_max"].get<std::int64_t>();
  }
  if (!j.at("n_m_max").is_null()) {
    c.has_n_m_max = 1;
    c.n_m_max = j["n_m_max"].get<std::int64_t>();
  }
  if (!j.at("fixed_l0_km").is_null()) {
    c.has_fixed_l0 = 1;
    c.fixed_l0_km = j["fixed_l0_km"].get<double>();
  }
  if (!j.at("fixed_n").is_null()) {
    c.has_fixed_n = 1;
    c.fixed_n = j["fixed_n"].get<std::int64_t>();
  }
  if (!j.at("tau_min_us").is_null()) {
    c.has_tau_min = 1;
    c.tau_min = us(j["tau_min_us"]);
  }
  return c;
}

std::vector<double> sweep_distances(const Json& cfg) {
  const Json& s = cfg.at("sweep");
  std::vector<double> out;
  if (!s.at("L_km").is_null()) {
    for (const auto& v : s["L_km"]) out.push_back(v.get<double>());
    if (out.empty()) throw config_error("sweep.L_km: must be nonempty");
    return out;
  }
  const double start = s.at("start_km").get<double>();
  const double stop = s.at("stop_km").get<double>();
  const double step = s.at("step_km").get<double>();
  if (!(start > 0.0)) throw config_error("sweep.start_km: must be > 0");
  if (!(step > 0.0)) throw config_error("sweep.step_km: must be > 0");
  if (!(stop >= start)) throw config_error("sweep.stop_km: must be >= start_km");
  // Index-based so the grid does not accumulate round-off.
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (count > 100000) throw config_error("sweep.step_km: more than 100000 distances");
  for (long i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

} // namespace cli
