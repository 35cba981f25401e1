// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ionrep Authors

#include "cli_commands.hpp"

#include <filesystem>
#include <fstream>
#include <memory>

namespace cli {

namespace {

enum class Value { Rate, MOpt, NOpt, CommIons, MemIons };

struct Curve {
  std::string name;
  Value value;
  std::int64_t M;
  Json hardware;    // overrides on top of the run config
  Json constraints; // replaces the run config's constraints
};

struct SweepDeleter {
  void operator()(ionrep_sweep* s) const { ionrep_sweep_destroy(s); }
};

Json noise(double eps) { return Json{{"eps_g", eps}, {"f0", 1.0 - eps}}; }

std::string eps_tag(double eps) {
  if (eps == 0.0) return "eps0";
  return eps == 1e-4 ? "eps1e-4" : "eps1e-3";
}

Value value_of(const std::string& id) {
  if (id == "fig3") return Value::MOpt;
  if (id == "fig4") return Value::NOpt;
  if (id == "fig5") return Value::CommIons;
  if (id == "fig6") return Value::MemIons;
  return Value::Rate;
}

std::vector<Curve> curves_for(const std::string& id) {
  std::vector<Curve> out;
  const Json none = Json::object();
  if (id == "fig2" || id == "fig3" || id == "fig4" || id == "fig5" || id == "fig6") {
    for (std::int64_t M : {1, 5, 10})
      for (double eps : {0.0, 1e-4, 1e-3})
        out.push_back({id + "_M" + std::to_string(M) + "_" + eps_tag(eps), value_of(id), M, noise(eps), none});
  } else if (id == "fig7") {
    for (std::int64_t M : {1, 5, 10}) {
      Json hw = noise(1e-4);
      hw["tau_g_us"] = 10.0;
      out.push_back({"fig7_M" + std::to_string(M) + "_taug10us", Value::Rate, M, hw, none});
    }
  } else if (id == "fig8") {
    for (const auto& [tag, l0] : std::vector<std::pair<std::string, double>>{
             {"1.7", 1.7}, {"5", 5.0}, {"10", 10.0}, {"20", 20.0}, {"50", 50.0}})
      out.push_back({"fig8_L0_" + tag + "km_M10", Value::Rate, 10, noise(1e-4), Json{{"fixed_l0_km", l0}}});
  } else if (id == "fig9") {
    for (const auto& [M, tau_us] : std::vector<std::pair<std::int64_t, double>>{{1, 1.0}, {5, 1.0}, {10, 10.0}, {50, 10.0}}) {
      Json hw = noise(1e-4);
      hw["tau_us"] = tau_us;
      hw["tau_g_us"] = 1.0;
      out.push_back({"fig9_Nomax125_M" + std::to_string(M) + "_tau" + (tau_us == 1.0 ? "1us" : "10us"), Value::Rate,
                     M, hw, Json{{"n_o_max", 125}, {"tau_min_us", 1.0}}});
    }
    for (std::int64_t cap : {10, 20, 50, 100}) {
      Json hw = noise(1e-4);
      hw["tau_g_us"] = 1.0;
      out.push_back({"fig9_Nmmax" + std::to_string(cap) + "_M5", Value::Rate, 5, hw, Json{{"n_m_max", cap}}});
    }
  }
  return out;
}

Json value_cell(Value v, const ionrep_opt_result& r) {
  switch (v) {
  case Value::Rate: return num9(r.report.noisy_rate);
  case Value::MOpt: return r.m_opt;
  case Value::NOpt: return r.n_opt;
  case Value::CommIons: return r.report.n_o;
  case Value::MemIons: return r.report.n_m;
  }
  return nullptr;
}

Table run_curve(const Context& ctx, const Curve& curve, const std::vector<double>& distances) {
  Json cfg = ctx.cfg;
  for (const auto& [k, v] : curve.hardware.items()) cfg["hardware"][k] = v;
  for (auto& [k, v] : cfg["constraints"].items()) v = nullptr;
  for (const auto& [k, v] : curve.constraints.items()) cfg["constraints"][k] = v;

  const Profile profile = make_profile(cfg);
  const ionrep_bounds bounds = make_bounds(cfg);
  const ionrep_constraints cons = make_constraints(cfg);
  ionrep_sweep* raw = nullptr;
  check(ionrep_sweep_run(profile.get(), distances.data(), distances.size(), curve.M, &bounds, &cons, ctx.threads,
                         &raw));
  const std::unique_ptr<ionrep_sweep, SweepDeleter> sweep(raw);

  Table t;
  t.columns = {"L_km", "value", "regime", "n_opt", "m_opt", "N_o", "N_m", "plob"};
  for (std::size_t i = 0; i < ionrep_sweep_size(sweep.get()); ++i) {
    ionrep_sweep_row row{};
    check(ionrep_sweep_row_get(sweep.get(), i, &row));
    if (!row.feasible) {
      t.rows.push_back({num9(row.total_km), nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, num9(row.plob)});
      continue;
    }
    const auto& r = row.result;
    t.rows.push_back({num9(row.total_km), value_cell(curve.value, r), ionrep_regime_name(r.report.regime), r.n_opt,
                      r.m_opt, r.report.n_o, r.report.n_m, num9(row.plob)});
  }
  return t;
}

} // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"};
  return ids;
}

int run_figure(const Context& ctx, const FigureOptions& opts) {
  const std::vector<Curve> curves = curves_for(opts.id);
  if (curves.empty()) throw config_error("figure: unknown id '" + opts.id + "'");
  const std::vector<double> distances = sweep_distances(ctx.cfg);

  std::error_code ec;
  std::filesystem::create_directories(opts.out_dir, ec);
  if (ec) throw config_error(opts.out_dir + ": cannot create output directory");

  Table manifest;
  manifest.columns = {"curve", "file", "rows"};
  for (const Curve& curve : curves) {
    const Table t = run_curve(ctx, curve, distances);
    const auto path = (std::filesystem::path(opts.out_dir) / (curve.name + ".csv")).string();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw config_error(path + ": cannot open for writing");
    write_csv(f, t);
    if (!f) throw CommandError(kExitInternal, path + ": write failed");
    manifest.rows.push_back({curve.name, path, static_cast<std::int64_t>(t.rows.size())});
  }
  write_table(*ctx.out, ctx.format, "figure", manifest);
  return kExitOk;
}

} // namespace cli
