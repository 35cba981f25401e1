// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ionrep Authors

#pragma once

#include "model.hpp"
#include "rate_engine.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ionrep {

/// Block-wise Monte Carlo of the multiplexed protocol on an integer clock.
struct SimConfig {
  std::int64_t n_repeaters = 0;
  std::int64_t spatial_mux = 1; // M
  std::int64_t time_mux = 1;    // m
  std::int64_t j_steps = 1;     // gate time in clock steps
  std::int64_t k_steps = 1;     // heralding latency in clock steps
  double comm_lifetime_steps = 50.0; // tau_o / tau, used only for regime selection
  double tau = 1e-6;                 // seconds per step, used for the empirical rate
  double p = 0.5;                    // per-mode elementary-link success probability
  std::int64_t n_comm_ions = 0;      // per node; 0 = unlimited
  std::int64_t n_mem_ions = 0;       // per node; 0 = unlimited
  std::int64_t num_blocks = 1000;
  std::uint64_t seed = 0;
  std::int64_t trace_blocks = 0; // leading blocks whose events are logged
  unsigned threads = 1;          // 0 = machine parallelism

  void validate() const;
  Regime regime() const;
};

/// Quantizes a physical layout: j = ceil(tau_g / tau), k = ceil(T / tau).
SimConfig make_sim_config(const ChainLayout& layout, const HardwareProfile& hw,
                          std::optional<double> p_override = std::nullopt);

enum class TraceEvent : int {
  Init,        // communication ions initialized (attempts started)
  DropComm,    // attempts lost to an exhausted communication-ion pool
  CommRelease, // communication ions freed
  MemLoad,     // states swapped into memory ions
  DropMem,     // states lost to an exhausted memory-ion pool
  MemRelease,  // memory ions freed after a failed/unused herald
  Herald,      // a heralded pair kept for the block
  Swap,        // block-end entanglement swap (count = 1 success, 0 failure)
  Clear,       // memory ions cleared by the global measurement
  CommLoaded,  // occupancy snapshot: busy communication ions
  MemLoaded,   // occupancy snapshot: busy memory ions
  Heralded,    // occupancy snapshot: kept heralded memory ions
};

std::string_view trace_event_name(TraceEvent e);

struct TraceRecord {
  std::int64_t block = 0;
  std::int64_t step = 0;
  std::int64_t node = 0;
  TraceEvent event = TraceEvent::Init;
  std::int64_t count = 0;
};

/// Header for the line-oriented trace log.
inline constexpr std::string_view kTraceHeader = "block,step,node,event,count";
std::string format_trace_record(const TraceRecord& r);

struct SimStats {
  Regime regime = Regime::A;
  std::int64_t blocks_run = 0;
  std::int64_t successes = 0;
  double empirical_block_success = 0.0;
  double empirical_rate = 0.0; // ebits/s
  std::int64_t block_wall_steps = 0;
  std::int64_t peak_comm_loaded = 0;
  std::int64_t peak_mem_loaded = 0;
  std::int64_t peak_heralded = 0;
  std::int64_t dropped_comm = 0;
  std::int64_t dropped_mem = 0;
  std::vector<TraceRecord> trace;
};

/// Deterministic for a given (config, seed) irrespective of thread count.
SimStats run_protocol_sim(const SimConfig& config);

/// Wall time of one block in clock steps, i.e. the regime denominator with
/// integer j and k.
std::int64_t block_wall_steps(const SimConfig& config);

/// Occupancy requirements evaluated with the simulator's integer j, k.
IonRequirements integer_ion_requirements(const SimConfig& config);

struct ValidationVerdict {
  bool pass = false;
  double expected_block_success = 0.0;
  double empirical_block_success = 0.0;
  double z_score = 0.0;
  bool success_ok = false;
  bool comm_ok = false;
  bool mem_ok = false;
  std::int64_t expected_n_o = 0;   // integer-step requirement
  std::int64_t expected_n_m = 0;
  std::int64_t analytic_n_o = 0;   // real-k requirement from the report
  std::int64_t n_o_quantization_delta = 0;
  double quantization_delta_steps = 0.0; // simulated wall steps - analytic denominator
  std::vector<std::string> failures;
};

/// Compares simulated statistics with an analytic report. Block success
/// must lie within `sigma` binomial standard deviations; peak occupancies
/// must respect the integer-step ion requirements (exact for N_o in the
/// immediate-gate regimes when m >= j and the chain has a repeater node).
ValidationVerdict validate_against_analytic(const SimConfig& config, const SimStats& stats,
                                            const RateReport& report, double sigma = 3.0);

ValidationVerdict validate_against_analytic(const SimConfig& config, const RateReport& report,
                                            double sigma = 3.0);

struct QEstimate {
  double q = 0.0;
  double std_error = 0.0;
  bool out_of_domain = false;
};

/// Monte Carlo estimate of the end-to-end error parameter Q(n): each hop
/// flips a binary error flag with probability (1 - x)/2.
QEstimate sample_end_to_end_Q(std::int64_t n, const NoiseParams& noise, std::int64_t trials, std::uint64_t seed);

} // namespace ionrep
