// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ionrep Authors

#include "ionrep/ionrep.h"

#include "errors.hpp"
#include "model.hpp"
#include "optimizer.hpp"
#include "protocol_sim.hpp"
#include "rate_engine.hpp"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <string_view>
#include <vector>

struct ionrep_profile {
  ionrep::HardwareProfile hw;
};

struct ionrep_sweep {
  std::vector<ionrep::SweepRow> rows;
};

struct ionrep_sim {
  ionrep::SimConfig config;
  ionrep::SimStats stats;
};

namespace {

thread_local std::string g_last_error;

ionrep_status fail(ionrep_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Maps the core's exceptions onto status codes.
template <class F>
ionrep_status guarded(F&& f) {
  try {
    f();
    return IONREP_OK;
  } catch (const ionrep::ParameterError& e) {
    return fail(IONREP_ERR_PARAMETER, e.what());
  } catch (const ionrep::FeasibilityError& e) {
    return fail(IONREP_ERR_FEASIBILITY, e.what());
  } catch (const ionrep::InfeasibleError& e) {
    return fail(IONREP_ERR_INFEASIBLE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(IONREP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(IONREP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(IONREP_ERR_INTERNAL, "unknown error");
  }
}

#define IONREP_REQUIRE(ptr)                                                                                            \
  do {                                                                                                                 \
    if ((ptr) == nullptr) return fail(IONREP_ERR_NULL_ARGUMENT, #ptr " is NULL");                                      \
  } while (0)

double* profile_field(ionrep::HardwareProfile& hw, std::string_view key) {
  if (key == "eta_c") return &hw.optical.eta_c;
  if (key == "eta_d") return &hw.optical.eta_d;
  if (key == "alpha_db_per_km") return &hw.optical.alpha_db_per_km;
  if (key == "refractive_index") return &hw.optical.refractive_index;
  if (key == "tau") return &hw.timing.tau;
  if (key == "tau_g") return &hw.timing.tau_g;
  if (key == "tau_o") return &hw.timing.tau_o;
  if (key == "tau_m") return &hw.timing.tau_m;
  if (key == "f0") return &hw.noise.f0;
  if (key == "eps_g") return &hw.noise.eps_g;
  if (key == "memory_margin") return &hw.memory_margin;
  return nullptr;
}

ionrep::ChainLayout to_layout(const ionrep_layout& l) {
  return ionrep::ChainLayout{l.total_distance_km, l.n_repeaters, l.spatial_mux, l.time_mux};
}

ionrep_rate_report to_c(const ionrep::RateReport& r) {
  ionrep_rate_report o{};
  o.regime = static_cast<ionrep_regime>(r.regime);
  o.p = r.p;
  o.block_success = r.block_success;
  o.denominator_steps = r.denominator_steps;
  o.ideal_rate = r.ideal_rate;
  o.f_end = r.f_end;
  o.rci = r.rci;
  o.noisy_rate = r.noisy_rate;
  o.heralding_time_s = r.timing.heralding_time_s;
  o.j_steps = r.timing.j_steps;
  o.k_steps = r.timing.k_steps;
  o.n_o = r.ions.n_o;
  o.n_m = r.ions.n_m;
  o.n_m_is_upper_bound = r.ions.n_m_is_upper_bound ? 1 : 0;
  o.q_out_of_domain = r.q_out_of_domain ? 1 : 0;
  return o;
}

ionrep::RateReport from_c(const ionrep_rate_report& o) {
  ionrep::RateReport r;
  r.regime = static_cast<ionrep::Regime>(o.regime);
  r.p = o.p;
  r.block_success = o.block_success;
  r.denominator_steps = o.denominator_steps;
  r.ideal_rate = o.ideal_rate;
  r.f_end = o.f_end;
  r.rci = o.rci;
  r.noisy_rate = o.noisy_rate;
  r.timing = {o.heralding_time_s, o.j_steps, o.k_steps};
  r.ions = {o.n_o, o.n_m, o.n_m_is_upper_bound != 0};
  r.q_out_of_domain = o.q_out_of_domain != 0;
  return r;
}

const char* static_constraint_name(const std::string& name) {
  static constexpr const char* known[] = {"n_o_max", "n_m_max", "tau_m", "tau_min"};
  for (const char* k : known)
    if (name == k) return k;
  return "other";
}

void fill_binding(const std::vector<std::string>& names, ionrep_opt_result& o) {
  o.binding_count = 0;
  for (const auto& b : names) {
    if (o.binding_count >= IONREP_MAX_BINDING) break;
    o.binding[o.binding_count++] = static_constraint_name(b);
  }
}

ionrep_opt_result to_c(const ionrep::OptimizationResult& r) {
  ionrep_opt_result o{};
  o.n_opt = r.n_opt;
  o.m_opt = r.m_opt;
  o.report = to_c(r.report);
  o.boundary_hit_n = r.boundary_hit.n ? 1 : 0;
  o.boundary_hit_m = r.boundary_hit.m ? 1 : 0;
  o.evaluations = r.evaluations;
  fill_binding(r.binding_constraints, o);
  return o;
}

ionrep::SearchBounds to_bounds(const ionrep_bounds* b) {
  ionrep::SearchBounds out;
  if (b) {
    out.n_max = b->n_max;
    out.m_max = b->m_max;
  }
  return out;
}

ionrep::Constraints to_constraints(const ionrep_constraints* c) {
  ionrep::Constraints out;
  if (!c) return out;
  if (c->has_n_o_max) out.n_o_max = c->n_o_max;
  if (c->has_n_m_max) out.n_m_max = c->n_m_max;
  if (c->has_fixed_l0) out.fixed_l0_km = c->fixed_l0_km;
  if (c->has_fixed_n) out.fixed_n = c->fixed_n;
  if (c->has_tau_min) out.tau_min = c->tau_min;
  return out;
}

ionrep::SimConfig to_core(const ionrep_sim_config& c) {
  ionrep::SimConfig s;
  s.n_repeaters = c.n_repeaters;
  s.spatial_mux = c.spatial_mux;
  s.time_mux = c.time_mux;
  s.j_steps = c.j_steps;
  s.k_steps = c.k_steps;
  s.comm_lifetime_steps = c.comm_lifetime_steps;
  s.tau = c.tau;
  s.p = c.p;
  s.n_comm_ions = c.n_comm_ions;
  s.n_mem_ions = c.n_mem_ions;
  s.num_blocks = c.num_blocks;
  s.seed = c.seed;
  s.trace_blocks = c.trace_blocks;
  s.threads = c.threads;
  return s;
}

ionrep_sim_config to_c(const ionrep::SimConfig& s) {
  ionrep_sim_config c{};
  c.n_repeaters = s.n_repeaters;
  c.spatial_mux = s.spatial_mux;
  c.time_mux = s.time_mux;
  c.j_steps = s.j_steps;
  c.k_steps = s.k_steps;
  c.comm_lifetime_steps = s.comm_lifetime_steps;
  c.tau = s.tau;
  c.p = s.p;
  c.n_comm_ions = s.n_comm_ions;
  c.n_mem_ions = s.n_mem_ions;
  c.num_blocks = s.num_blocks;
  c.seed = s.seed;
  c.trace_blocks = s.trace_blocks;
  c.threads = s.threads;
  return c;
}

} // namespace

extern "C" {

IONREP_API const char* ionrep_version(void) { return IONREP_VERSION_STRING; }

IONREP_API const char* ionrep_last_error(void) { return g_last_error.c_str(); }

IONREP_API const char* ionrep_status_name(ionrep_status status) {
  switch (status) {
  case IONREP_OK: return "ok";
  case IONREP_ERR_NULL_ARGUMENT: return "null_argument";
  case IONREP_ERR_PARAMETER: return "parameter";
  case IONREP_ERR_UNKNOWN_KEY: return "unknown_key";
  case IONREP_ERR_FEASIBILITY: return "feasibility";
  case IONREP_ERR_INFEASIBLE: return "infeasible";
  case IONREP_ERR_OUT_OF_RANGE: return "out_of_range";
  case IONREP_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

IONREP_API const char* ionrep_regime_name(ionrep_regime regime) {
  if (regime < IONREP_REGIME_A || regime > IONREP_REGIME_C2) return "?";
  return ionrep::regime_name(static_cast<ionrep::Regime>(regime)).data();
}

IONREP_API ionrep_profile* ionrep_profile_create(void) { return new (std::nothrow) ionrep_profile{}; }

IONREP_API ionrep_profile* ionrep_profile_clone(const ionrep_profile* profile) {
  if (!profile) return nullptr;
  return new (std::nothrow) ionrep_profile{*profile};
}

IONREP_API void ionrep_profile_destroy(ionrep_profile* profile) { delete profile; }

IONREP_API ionrep_status ionrep_profile_set(ionrep_profile* profile, const char* key, double value) {
  IONREP_REQUIRE(profile);
  IONREP_REQUIRE(key);
  double* field = profile_field(profile->hw, key);
  if (!field) return fail(IONREP_ERR_UNKNOWN_KEY, std::string("unknown profile key: ") + key);
  *field = value;
  return IONREP_OK;
}

IONREP_API ionrep_status ionrep_profile_get(const ionrep_profile* profile, const char* key, double* value) {
  IONREP_REQUIRE(profile);
  IONREP_REQUIRE(key);
  IONREP_REQUIRE(value);
  auto& hw = const_cast<ionrep::HardwareProfile&>(profile->hw);
  const double* field = profile_field(hw, key);
  if (!field) return fail(IONREP_ERR_UNKNOWN_KEY, std::string("unknown profile key: ") + key);
  *value = *field;
  return IONREP_OK;
}

IONREP_API ionrep_status ionrep_profile_validate(const ionrep_profile* profile) {
  IONREP_REQUIRE(profile);
  return guarded([&] { profile->hw.validate(); });
}

IONREP_API ionrep_status ionrep_link_success_prob(const ionrep_profile* profile, double l0_km, double* p) {
  IONREP_REQUIRE(profile);
  IONREP_REQUIRE(p);
  return guarded([&] { *p = ionrep::link_success_prob(profile->hw.optical, l0_km); });
}

IONREP_API ionrep_status ionrep_heralding_time(double l0_km, double refractive_index, double* seconds) {
  IONREP_REQUIRE(seconds);
  return guarded([&] { *seconds = ionrep::heralding_time(l0_km, refractive_index); });
}

IONREP_API ionrep_status ionrep_end_to_end_fidelity(const ionrep_profile* profile, int64_t n_repeaters,
                                                    double* fidelity, int* out_of_domain) {
  IONREP_REQUIRE(profile);
  IONREP_REQUIRE(fidelity);
  return guarded([&] {
    profile->hw.noise.validate();
    const auto f = ionrep::end_to_end_fidelity(n_repeaters, profile->hw.noise);
    *fidelity = f.state.fidelity;
    if (out_of_domain) *out_of_domain = f.out_of_domain ? 1 : 0;
  });
}

IONREP_API ionrep_status ionrep_werner_rci(double fidelity, double* rci) {
  IONREP_REQUIRE(rci);
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) return fail(IONREP_ERR_PARAMETER, "fidelity: must lie in [0, 1]");
  *rci = ionrep::werner_rci(ionrep::WernerState{fidelity});
  return IONREP_OK;
}

IONREP_API ionrep_status ionrep_classify(const ionrep_profile* profile, double heralding_time_s,
                                         ionrep_classification* out) {
  IONREP_REQUIRE(profile);
  IONREP_REQUIRE(out);
  return guarded([&] {
    profile->hw.timing.validate();
    const auto c = ionrep::classify_regime_path(profile->hw.timing, heralding_time_s);
    *out = ionrep_classification{};
    out->regime = static_cast<ionrep_regime>(c.regime);
    out->path_length = static_cast<int>(c.path.size());
    for (std::size_t i = 0; i < c.path.size() && i < 3; ++i) {
      out->conditions[i] = static_cast<ionrep_condition>(c.path[i].condition);
      out->outcomes[i] = c.path[i].holds ? 1 : 0;
    }
  });
}

IONREP_API ionrep_status ionrep_evaluate_rate(const ionrep_profile* profile, const ionrep_layout* layout,
                                              ionrep_rate_report* out) {
  IONREP_REQUIRE(profile);
  IONREP_REQUIRE(layout);
  IONREP_REQUIRE(out);
  return guarded([&] { *out = to_c(ionrep::evaluate_rate(to_layout(*layout), profile->hw)); });
}

IONREP_API ionrep_status ionrep_evaluate_rate_at_p(const ionrep_profile* profile, const ionrep_layout* layout,
                                                   double p, ionrep_rate_report* out) {
  IONREP_REQUIRE(profile);
  IONREP_REQUIRE(layout);
  IONREP_REQUIRE(out);
  return guarded([&] { *out = to_c(ionrep::evaluate_rate_at_p(to_layout(*layout), profile->hw, p)); });
}

IONREP_API ionrep_status ionrep_plob_bound(double eta, int64_t spatial_mux, double tau, double* out) {
  IONREP_REQUIRE(out);
  return guarded([&] { *out = ionrep::plob_bound(eta, spatial_mux, tau); });
}

IONREP_API ionrep_status ionrep_direct_transmission_bound(const ionrep_profile* profile, double total_km,
                                                          int64_t spatial_mux, double* out) {
  IONREP_REQUIRE(profile);
  IONREP_REQUIRE(out);
  return guarded([&] { *out = ionrep::direct_transmission_bound(total_km, spatial_mux, profile->hw); });
}

IONREP_API ionrep_status ionrep_reference_rates_eval(int64_t n_repeaters, int64_t time_mux, int64_t spatial_mux,
                                                     double p, double q, double tau, ionrep_reference_rates* out) {
  IONREP_REQUIRE(out);
  return guarded([&] {
    const auto r = ionrep::reference_rates(n_repeaters, time_mux, spatial_mux, p, q, tau);
    *out = ionrep_reference_rates{r.r0, r.r1, r.r2, r.r};
  });
}

IONREP_API void ionrep_bounds_default(ionrep_bounds* bounds) {
  if (!bounds) return;
  const ionrep::SearchBounds d;
  bounds->n_max = d.n_max;
  bounds->m_max = d.m_max;
}

IONREP_API void ionrep_constraints_none(ionrep_constraints* constraints) {
  if (constraints) *constraints = ionrep_constraints{};
}

IONREP_API ionrep_status ionrep_optimize(const ionrep_profile* profile, double total_km, int64_t spatial_mux,
                                         const ionrep_bounds* bounds, const ionrep_constraints* constraints,
                                         unsigned threads, ionrep_opt_result* out) {
  IONREP_REQUIRE(profile);
  IONREP_REQUIRE(out);
  *out = ionrep_opt_result{};
  try {
    *out = to_c(ionrep::optimize_rate(total_km, spatial_mux, profile->hw, to_bounds(bounds),
                                      to_constraints(constraints), threads));
    return IONREP_OK;
  } catch (const ionrep::InfeasibleError& e) {
    fill_binding(e.binding_constraints(), *out);
    return fail(IONREP_ERR_INFEASIBLE, e.what());
  } catch (...) {
    return guarded([] { throw; });
  }
}

IONREP_API ionrep_status ionrep_sweep_run(const ionrep_profile* profile, const double* distances_km, size_t count,
                                          int64_t spatial_mux, const ionrep_bounds* bounds,
                                          const ionrep_constraints* constraints, unsigned threads,
                                          ionrep_sweep** out) {
  IONREP_REQUIRE(profile);
  IONREP_REQUIRE(distances_km);
  IONREP_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto sweep = std::make_unique<ionrep_sweep>();
    sweep->rows = ionrep::sweep_distance(std::span<const double>(distances_km, count), spatial_mux, profile->hw,
                                         to_bounds(bounds), to_constraints(constraints), threads);
    *out = sweep.release();
  });
}

IONREP_API size_t ionrep_sweep_size(const ionrep_sweep* sweep) { return sweep ? sweep->rows.size() : 0; }

IONREP_API ionrep_status ionrep_sweep_row_get(const ionrep_sweep* sweep, size_t index, ionrep_sweep_row* out) {
  IONREP_REQUIRE(sweep);
  IONREP_REQUIRE(out);
  if (index >= sweep->rows.size()) return fail(IONREP_ERR_OUT_OF_RANGE, "sweep row index out of range");
  const auto& row = sweep->rows[index];
  *out = ionrep_sweep_row{};
  out->total_km = row.total_km;
  out->plob = row.plob;
  out->feasible = row.feasible ? 1 : 0;
  if (row.feasible) out->result = to_c(row.result);
  out->error = row.error.c_str();
  return IONREP_OK;
}

IONREP_API void ionrep_sweep_destroy(ionrep_sweep* sweep) { delete sweep; }

IONREP_API ionrep_status ionrep_crossover_distance(const ionrep_profile* profile, int64_t spatial_mux,
                                                   const ionrep_bounds* bounds, const double* grid_km,
                                                   size_t count, unsigned threads, double* distance_km,
                                                   int* found) {
  IONREP_REQUIRE(profile);
  IONREP_REQUIRE(distance_km);
  IONREP_REQUIRE(found);
  return guarded([&] {
    std::vector<double> grid = (grid_km && count > 0) ? std::vector<double>(grid_km, grid_km + count)
                                                      : ionrep::default_crossover_grid();
    const auto d = ionrep::crossover_distance(spatial_mux, profile->hw, to_bounds(bounds), grid, threads);
    *found = d ? 1 : 0;
    *distance_km = d ? *d : 0.0;
  });
}

IONREP_API ionrep_status ionrep_sim_config_from_layout(const ionrep_profile* profile, const ionrep_layout* layout,
                                                       double p_override, ionrep_sim_config* out) {
  IONREP_REQUIRE(profile);
  IONREP_REQUIRE(layout);
  IONREP_REQUIRE(out);
  return guarded([&] {
    std::optional<double> p;
    if (p_override >= 0.0) p = p_override;
    *out = to_c(ionrep::make_sim_config(to_layout(*layout), profile->hw, p));
  });
}

IONREP_API ionrep_status ionrep_simulate(const ionrep_sim_config* config, ionrep_sim** out) {
  IONREP_REQUIRE(config);
  IONREP_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto sim = std::make_unique<ionrep_sim>();
    sim->config = to_core(*config);
    sim->stats = ionrep::run_protocol_sim(sim->config);
    *out = sim.release();
  });
}

IONREP_API ionrep_status ionrep_sim_stats_get(const ionrep_sim* sim, ionrep_sim_stats* out) {
  IONREP_REQUIRE(sim);
  IONREP_REQUIRE(out);
  const auto& s = sim->stats;
  *out = ionrep_sim_stats{};
  out->regime = static_cast<ionrep_regime>(s.regime);
  out->blocks_run = s.blocks_run;
  out->successes = s.successes;
  out->empirical_block_success = s.empirical_block_success;
  out->empirical_rate = s.empirical_rate;
  out->block_wall_steps = s.block_wall_steps;
  out->peak_comm_loaded = s.peak_comm_loaded;
  out->peak_mem_loaded = s.peak_mem_loaded;
  out->peak_heralded = s.peak_heralded;
  out->dropped_comm = s.dropped_comm;
  out->dropped_mem = s.dropped_mem;
  return IONREP_OK;
}

IONREP_API size_t ionrep_sim_trace_size(const ionrep_sim* sim) { return sim ? sim->stats.trace.size() : 0; }

IONREP_API ionrep_status ionrep_sim_trace_line(const ionrep_sim* sim, size_t index, char* buf, size_t buf_size) {
  IONREP_REQUIRE(sim);
  IONREP_REQUIRE(buf);
  if (index >= sim->stats.trace.size()) return fail(IONREP_ERR_OUT_OF_RANGE, "trace index out of range");
  const std::string line = ionrep::format_trace_record(sim->stats.trace[index]);
  if (line.size() + 1 > buf_size) return fail(IONREP_ERR_OUT_OF_RANGE, "trace buffer too small");
  std::memcpy(buf, line.c_str(), line.size() + 1);
  return IONREP_OK;
}

IONREP_API const char* ionrep_sim_trace_header(void) { return ionrep::kTraceHeader.data(); }

IONREP_API void ionrep_sim_destroy(ionrep_sim* sim) { delete sim; }

IONREP_API ionrep_status ionrep_validate(const ionrep_sim* sim, const ionrep_rate_report* report, double sigma,
                                         ionrep_verdict* out) {
  IONREP_REQUIRE(sim);
  IONREP_REQUIRE(report);
  IONREP_REQUIRE(out);
  return guarded([&] {
    const auto v = ionrep::validate_against_analytic(sim->config, sim->stats, from_c(*report), sigma);
    *out = ionrep_verdict{};
    out->pass = v.pass ? 1 : 0;
    out->expected_block_success = v.expected_block_success;
    out->empirical_block_success = v.empirical_block_success;
    out->z_score = v.z_score;
    out->success_ok = v.success_ok ? 1 : 0;
    out->comm_ok = v.comm_ok ? 1 : 0;
    out->mem_ok = v.mem_ok ? 1 : 0;
    out->expected_n_o = v.expected_n_o;
    out->expected_n_m = v.expected_n_m;
    out->analytic_n_o = v.analytic_n_o;
    out->n_o_quantization_delta = v.n_o_quantization_delta;
    out->quantization_delta_steps = v.quantization_delta_steps;
  });
}

IONREP_API ionrep_status ionrep_sample_end_to_end_q(const ionrep_profile* profile, int64_t n_repeaters,
                                                    int64_t trials, uint64_t seed, double* q, double* std_error,
                                                    int* out_of_domain) {
  IONREP_REQUIRE(profile);
  IONREP_REQUIRE(q);
  return guarded([&] {
    const auto est = ionrep::sample_end_to_end_Q(n_repeaters, profile->hw.noise, trials, seed);
    *q = est.q;
    if (std_error) *std_error = est.std_error;
    if (out_of_domain) *out_of_domain = est.out_of_domain ? 1 : 0;
  });
}

} // extern "C"
