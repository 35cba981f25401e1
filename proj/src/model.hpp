// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ionrep Authors

#pragma once

#include <cstdint>

namespace ionrep {

/// Vacuum speed of light in km/s.
inline constexpr double kSpeedOfLightKmPerS = 299792.458;

struct OpticalParams {
  double eta_c = 0.3;            // collection and fiber-coupling efficiency
  double eta_d = 0.8;            // detector efficiency
  double alpha_db_per_km = 0.2;  // fiber attenuation
  double refractive_index = 1.47;

  void validate() const;
};

/// All times in seconds.
struct TimingParams {
  double tau = 1e-6;    // clock cycle
  double tau_g = 1e-6;  // ion-ion gate / measurement time
  double tau_o = 50e-6; // communication-ion lifetime
  double tau_m = 60.0;  // memory-ion lifetime

  void validate() const;
};

struct NoiseParams {
  double f0 = 1.0 - 1e-4; // elementary-link Werner fidelity
  double eps_g = 1e-4;    // gate error parameter

  void validate() const;
};

struct HardwareProfile {
  OpticalParams optical;
  TimingParams timing;
  NoiseParams noise;
  // A block of D clock steps is admissible only if tau_m >= memory_margin * D * tau.
  double memory_margin = 10.0;

  void validate() const;
};

/// Bell-diagonal state with weight `fidelity` on the target Bell state and
/// (1 - fidelity)/3 on each of the other three.
struct WernerState {
  double fidelity = 1.0;
};

struct ChainLayout {
  double total_distance_km = 0.0;
  std::int64_t n_repeaters = 0;
  std::int64_t spatial_mux = 1; // M
  std::int64_t time_mux = 1;    // m

  void validate() const;
  double elementary_length_km() const { return total_distance_km / static_cast<double>(n_repeaters + 1); }
};

struct DerivedTiming {
  double heralding_time_s = 0.0; // T
  double j_steps = 0.0;          // tau_g / tau, real valued
  double k_steps = 0.0;          // T / tau, real valued
};

// ---- link physics ---------------------------------------------------------

/// Fiber transmissivity 10^(-alpha L / 10).
double transmissivity(double alpha_db_per_km, double length_km);

/// Heralded entanglement success probability across one elementary link.
double link_success_prob(const OpticalParams& optical, double l0_km);

/// Same-node, lossless-transmission variant of link_success_prob.
double intra_node_success_prob(const OpticalParams& optical);

/// Classical heralding latency L0 * n_ref / c0.
double heralding_time(double l0_km, double refractive_index);

DerivedTiming derive_timing(const ChainLayout& layout, const HardwareProfile& hw);

// ---- noise ------------------------------------------------------------------

WernerState apply_swap_gate_noise(WernerState state, double eps_g);

/// Per-hop contraction factor 1 - 2 eps_g - (4/3)(1 - F0).
double hop_survival_factor(const NoiseParams& noise);

struct QValue {
  double q = 0.0;
  bool out_of_domain = false; // survival factor < 0: outside the Werner regime
};

QValue end_to_end_Q(std::int64_t n, const NoiseParams& noise);

struct FidelityValue {
  WernerState state;
  bool out_of_domain = false;
};

FidelityValue end_to_end_fidelity(std::int64_t n, const NoiseParams& noise);

/// Reverse coherent information of a Werner state, 1 - H(AB), in ebits per pair.
double werner_rci(WernerState state);

} // namespace ionrep
