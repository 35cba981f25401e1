// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ionrep Authors

#include "cli_commands.hpp"

#include <fstream>
#include <memory>

namespace cli {

namespace {

struct SweepDeleter {
  void operator()(ionrep_sweep* s) const { ionrep_sweep_destroy(s); }
};
struct SimDeleter {
  void operator()(ionrep_sim* s) const { ionrep_sim_destroy(s); }
};

Json binding_list(const ionrep_opt_result& r) {
  Json list = Json::array();
  for (int i = 0; i < r.binding_count; ++i) list.push_back(r.binding[i]);
  return list;
}

double l0_of(const ionrep_layout& l) {
  return l.total_distance_km / static_cast<double>(l.n_repeaters + 1);
}

std::string relation(ionrep_condition c, bool holds) {
  switch (c) {
  case IONREP_COND_HERALD_GE_COMM_LIFETIME:
    return holds ? "T >= tau_o" : "T < tau_o";
  case IONREP_COND_HERALD_GE_GATE:
    return holds ? "T >= tau_g" : "T < tau_g";
  case IONREP_COND_HERALD_PLUS_GATE_GT_LIFETIME:
    return holds ? "T + tau_g > tau_o" : "T + tau_g <= tau_o";
  }
  return "?";
}

} // namespace

void append_report(Record& rec, const ionrep_rate_report& r) {
  rec.emplace_back("regime", ionrep_regime_name(r.regime));
  rec.emplace_back("noisy_rate", num9(r.noisy_rate));
  rec.emplace_back("ideal_rate", num9(r.ideal_rate));
  rec.emplace_back("f_end", num9(r.f_end));
  rec.emplace_back("rci", num9(r.rci));
  rec.emplace_back("p", num9(r.p));
  rec.emplace_back("block_success", num9(r.block_success));
  rec.emplace_back("denominator_steps", num9(r.denominator_steps));
  rec.emplace_back("heralding_time_us", num9(r.heralding_time_s * 1e6));
  rec.emplace_back("j", num9(r.j_steps));
  rec.emplace_back("k", num9(r.k_steps));
  rec.emplace_back("N_o", r.n_o);
  rec.emplace_back("N_m", r.n_m);
  rec.emplace_back("N_m_upper_bound", r.n_m_is_upper_bound != 0);
  rec.emplace_back("q_out_of_domain", r.q_out_of_domain != 0);
}

int run_rate(const Context& ctx) {
  const Profile profile = make_profile(ctx.cfg);
  const ionrep_layout layout = make_layout(ctx.cfg);
  ionrep_rate_report r{};
  check(ionrep_evaluate_rate(profile.get(), &layout, &r));
  Record rec{{"L_km", num9(layout.total_distance_km)},
             {"n", layout.n_repeaters},
             {"M", layout.spatial_mux},
             {"m", layout.time_mux},
             {"l0_km", num9(l0_of(layout))}};
  append_report(rec, r);
  write_record(*ctx.out, ctx.format, "rate", rec);
  return kExitOk;
}

int run_optimize(const Context& ctx) {
  const Profile profile = make_profile(ctx.cfg);
  const ionrep_layout layout = make_layout(ctx.cfg);
  const ionrep_bounds bounds = make_bounds(ctx.cfg);
  const ionrep_constraints cons = make_constraints(ctx.cfg);
  ionrep_opt_result res{};
  const ionrep_status st =
      ionrep_optimize(profile.get(), layout.total_distance_km, layout.spatial_mux, &bounds, &cons, ctx.threads, &res);
  if (st == IONREP_ERR_INFEASIBLE) {
    const Json binding = binding_list(res);
    std::string names = cell(binding);
    throw CommandError(kExitInfeasible, std::string(ionrep_last_error()) + " (binding: " + names + ")",
                       Json{{"binding", binding}});
  }
  check(st);
  double plob = 0.0;
  check(ionrep_direct_transmission_bound(profile.get(), layout.total_distance_km, layout.spatial_mux, &plob));
  Record rec{{"L_km", num9(layout.total_distance_km)},
             {"M", layout.spatial_mux},
             {"n_opt", res.n_opt},
             {"m_opt", res.m_opt},
             {"l0_km", num9(layout.total_distance_km / static_cast<double>(res.n_opt + 1))}};
  append_report(rec, res.report);
  rec.emplace_back("plob", num9(plob));
  rec.emplace_back("boundary_hit_n", res.boundary_hit_n != 0);
  rec.emplace_back("boundary_hit_m", res.boundary_hit_m != 0);
  rec.emplace_back("evaluations", res.evaluations);
  rec.emplace_back("binding", binding_list(res));
  write_record(*ctx.out, ctx.format, "optimize", rec);
  return kExitOk;
}

int run_sweep(const Context& ctx) {
  const Profile profile = make_profile(ctx.cfg);
  const ionrep_layout layout = make_layout(ctx.cfg);
  const ionrep_bounds bounds = make_bounds(ctx.cfg);
  const ionrep_constraints cons = make_constraints(ctx.cfg);
  const std::vector<double> distances = sweep_distances(ctx.cfg);
  ionrep_sweep* raw = nullptr;
  check(ionrep_sweep_run(profile.get(), distances.data(), distances.size(), layout.spatial_mux, &bounds, &cons,
                         ctx.threads, &raw));
  const std::unique_ptr<ionrep_sweep, SweepDeleter> sweep(raw);

  Table t;
  t.columns = {"L_km", "feasible", "n_opt", "m_opt", "regime", "noisy_rate", "ideal_rate", "rci",
               "N_o",  "N_m",      "plob",  "binding", "error"};
  for (std::size_t i = 0; i < ionrep_sweep_size(sweep.get()); ++i) {
    ionrep_sweep_row row{};
    check(ionrep_sweep_row_get(sweep.get(), i, &row));
    if (row.feasible) {
      const auto& r = row.result;
      t.rows.push_back({num9(row.total_km), true, r.n_opt, r.m_opt, ionrep_regime_name(r.report.regime),
                        num9(r.report.noisy_rate), num9(r.report.ideal_rate), num9(r.report.rci), r.report.n_o,
                        r.report.n_m, num9(row.plob), binding_list(r), ""});
    } else {
      t.rows.push_back({num9(row.total_km), false, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr,
                        nullptr, num9(row.plob), binding_list(row.result), row.error});
    }
  }
  write_table(*ctx.out, ctx.format, "sweep", t);
  return kExitOk;
}

int run_classify(const Context& ctx) {
  const Profile profile = make_profile(ctx.cfg);
  const Json& l = ctx.cfg.at("layout");
  double l0 = 0.0;
  if (!l.at("l0_km").is_null()) {
    l0 = l["l0_km"].get<double>();
  } else {
    l0 = l0_of(make_layout(ctx.cfg));
  }
  double n_ref = 0.0;
  check(ionrep_profile_get(profile.get(), "refractive_index", &n_ref));
  double t_s = 0.0;
  if (ionrep_heralding_time(l0, n_ref, &t_s) != IONREP_OK) throw config_error("layout.l0_km: must be >= 0");
  ionrep_classification c{};
  check(ionrep_classify(profile.get(), t_s, &c));
  double tau_g = 0.0;
  double tau_o = 0.0;
  check(ionrep_profile_get(profile.get(), "tau_g", &tau_g));
  check(ionrep_profile_get(profile.get(), "tau_o", &tau_o));

  Json path = Json::array();
  for (int i = 0; i < c.path_length; ++i) path.push_back(relation(c.conditions[i], c.outcomes[i] != 0));
  Record rec{{"l0_km", num9(l0)},
             {"heralding_time_us", num9(t_s * 1e6)},
             {"tau_g_us", num9(tau_g * 1e6)},
             {"tau_o_us", num9(tau_o * 1e6)},
             {"regime", ionrep_regime_name(c.regime)},
             {"path", path}};
  write_record(*ctx.out, ctx.format, "classify", rec);
  return kExitOk;
}

int run_simulate(const Context& ctx, const SimulateOptions& opts) {
  const Profile profile = make_profile(ctx.cfg);
  const ionrep_layout layout = make_layout(ctx.cfg);
  const Json& s = ctx.cfg.at("simulation");
  const double p_override = s.at("p_override").is_null() ? -1.0 : s["p_override"].get<double>();
  if (!s.at("p_override").is_null() && !(p_override >= 0.0 && p_override <= 1.0))
    throw config_error("simulation.p_override: must lie in [0, 1]");

  if (s.at("seed").is_number_integer() && s["seed"].get<std::int64_t>() < 0 && !s["seed"].is_number_unsigned())
    throw config_error("simulation.seed: must be >= 0");

  ionrep_sim_config sc{};
  check(ionrep_sim_config_from_layout(profile.get(), &layout, p_override, &sc));
  sc.num_blocks = s.at("blocks").get<std::int64_t>();
  sc.seed = s.at("seed").get<std::uint64_t>();
  sc.n_comm_ions = s.at("n_comm_ions").get<std::int64_t>();
  sc.n_mem_ions = s.at("n_mem_ions").get<std::int64_t>();
  sc.trace_blocks = opts.trace_path.empty() ? 0 : s.at("trace_blocks").get<std::int64_t>();
  sc.threads = ctx.threads;

  ionrep_sim* raw = nullptr;
  check(ionrep_simulate(&sc, &raw));
  const std::unique_ptr<ionrep_sim, SimDeleter> sim(raw);
  ionrep_sim_stats st{};
  check(ionrep_sim_stats_get(sim.get(), &st));

  if (!opts.trace_path.empty()) {
    std::ofstream trace(opts.trace_path, std::ios::binary);
    if (!trace) throw config_error(opts.trace_path + ": cannot open trace file");
    trace << ionrep_sim_trace_header() << '\n';
    char buf[256];
    for (std::size_t i = 0; i < ionrep_sim_trace_size(sim.get()); ++i) {
      check(ionrep_sim_trace_line(sim.get(), i, buf, sizeof buf));
      trace << buf << '\n';
    }
    if (!trace) throw CommandError(kExitInternal, opts.trace_path + ": write failed");
  }

  Record rec{{"regime", ionrep_regime_name(st.regime)},
             {"n", sc.n_repeaters},
             {"M", sc.spatial_mux},
             {"m", sc.time_mux},
             {"j_steps", sc.j_steps},
             {"k_steps", sc.k_steps},
             {"p", num9(sc.p)},
             {"seed", sc.seed},
             {"blocks_run", st.blocks_run},
             {"successes", st.successes},
             {"empirical_block_success", num9(st.empirical_block_success)},
             {"empirical_rate", num9(st.empirical_rate)},
             {"block_wall_steps", st.block_wall_steps},
             {"peak_comm_loaded", st.peak_comm_loaded},
             {"peak_mem_loaded", st.peak_mem_loaded},
             {"peak_heralded", st.peak_heralded},
             {"dropped_comm", st.dropped_comm},
             {"dropped_mem", st.dropped_mem}};

  bool pass = true;
  if (opts.validate) {
    ionrep_rate_report report{};
    check(ionrep_evaluate_rate_at_p(profile.get(), &layout, sc.p, &report));
    ionrep_verdict v{};
    check(ionrep_validate(sim.get(), &report, s.at("sigma").get<double>(), &v));
    pass = v.pass != 0;
    rec.emplace_back("validation", pass ? "pass" : "fail");
    rec.emplace_back("expected_block_success", num9(v.expected_block_success));
    rec.emplace_back("z_score", num9(v.z_score));
    rec.emplace_back("success_ok", v.success_ok != 0);
    rec.emplace_back("comm_ok", v.comm_ok != 0);
    rec.emplace_back("mem_ok", v.mem_ok != 0);
    rec.emplace_back("expected_N_o", v.expected_n_o);
    rec.emplace_back("expected_N_m", v.expected_n_m);
    rec.emplace_back("analytic_N_o", v.analytic_n_o);
    rec.emplace_back("N_o_quantization_delta", v.n_o_quantization_delta);
  }
  write_record(*ctx.out, ctx.format, "simulate", rec);
  return pass ? kExitOk : kExitValidation;
}

} // namespace cli
