// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ionrep Authors

#include "model.hpp"

#include "errors.hpp"

#include <cmath>
#include <string>

namespace ionrep {

namespace {

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw ParameterError(field, what);
}

bool finite(double x) { return std::isfinite(x); }

double plogp(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

} // namespace

void OpticalParams::validate() const {
  require(finite(eta_c) && eta_c > 0.0 && eta_c <= 1.0, "eta_c", "must lie in (0, 1]");
  require(finite(eta_d) && eta_d > 0.0 && eta_d <= 1.0, "eta_d", "must lie in (0, 1]");
  require(finite(alpha_db_per_km) && alpha_db_per_km >= 0.0, "alpha_db_per_km", "must be >= 0");
  require(finite(refractive_index) && refractive_index >= 1.0, "refractive_index", "must be >= 1");
}

void TimingParams::validate() const {
  require(finite(tau) && tau > 0.0, "tau", "must be > 0");
  require(finite(tau_g) && tau_g > 0.0, "tau_g", "must be > 0");
  require(finite(tau_o) && tau_o > 0.0, "tau_o", "must be > 0");
  require(finite(tau_m) && tau_m > 0.0, "tau_m", "must be > 0");
  require(tau_o > tau_g, "tau_o", "communication-ion lifetime must exceed the gate time tau_g");
}

void NoiseParams::validate() const {
  require(finite(f0) && f0 >= 0.25 && f0 <= 1.0, "f0", "must lie in [0.25, 1]");
  require(finite(eps_g) && eps_g >= 0.0 && eps_g <= 1.0, "eps_g", "must lie in [0, 1]");
}

void HardwareProfile::validate() const {
  optical.validate();
  timing.validate();
  noise.validate();
  require(finite(memory_margin) && memory_margin > 0.0, "memory_margin", "must be > 0");
}

void ChainLayout::validate() const {
  require(finite(total_distance_km) && total_distance_km > 0.0, "L_km", "must be > 0");
  require(n_repeaters >= 0, "n", "must be >= 0");
  require(spatial_mux >= 1, "M", "must be >= 1");
  require(time_mux >= 1, "m", "must be >= 1");
}

double transmissivity(double alpha_db_per_km, double length_km) {
  return std::pow(10.0, -alpha_db_per_km * length_km / 10.0);
}

double link_success_prob(const OpticalParams& optical, double l0_km) {
  optical.validate();
  require(finite(l0_km) && l0_km >= 0.0, "l0_km", "must be >= 0");
  const double coupling = optical.eta_c * optical.eta_c * optical.eta_d * optical.eta_d;
  return 0.5 * coupling * transmissivity(optical.alpha_db_per_km, l0_km);
}

double intra_node_success_prob(const OpticalParams& optical) { return link_success_prob(optical, 0.0); }

double heralding_time(double l0_km, double refractive_index) {
  require(finite(l0_km) && l0_km >= 0.0, "l0_km", "must be >= 0");
  return l0_km * refractive_index / kSpeedOfLightKmPerS;
}

DerivedTiming derive_timing(const ChainLayout& layout, const HardwareProfile& hw) {
  DerivedTiming d;
  d.heralding_time_s = heralding_time(layout.elementary_length_km(), hw.optical.refractive_index);
  d.j_steps = hw.timing.tau_g / hw.timing.tau;
  d.k_steps = d.heralding_time_s / hw.timing.tau;
  return d;
}

WernerState apply_swap_gate_noise(WernerState state, double eps_g) {
  return WernerState{(1.0 - eps_g) * state.fidelity + eps_g / 4.0};
}

double hop_survival_factor(const NoiseParams& noise) {
  return 1.0 - 2.0 * noise.eps_g - (4.0 / 3.0) * (1.0 - noise.f0);
}

QValue end_to_end_Q(std::int64_t n, const NoiseParams& noise) {
  require(n >= 0, "n", "must be >= 0");
  const double x = hop_survival_factor(noise);
  QValue out;
  out.out_of_domain = x < 0.0;
  out.q = 0.5 * (1.0 - std::pow(x, static_cast<double>(n)));
  return out;
}

FidelityValue end_to_end_fidelity(std::int64_t n, const NoiseParams& noise) {
  const QValue q = end_to_end_Q(n, noise);
  return FidelityValue{WernerState{1.0 - 1.5 * q.q}, q.out_of_domain};
}

double werner_rci(WernerState state) {
  const double f = state.fidelity;
  // H(B) = 1 for any Bell-diagonal state.
  const double h_ab = -plogp(f) - 3.0 * plogp((1.0 - f) / 3.0);
  return 1.0 - h_ab;
}

} // namespace ionrep
