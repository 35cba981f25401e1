// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ionrep Authors

#pragma once

#include "model.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace ionrep {

/// Timing regime: ordering of heralding time T, gate time tau_g and
/// communication-ion lifetime tau_o.
enum class Regime : int { A = 0, B1 = 1, B2 = 2, C1 = 3, C2 = 4 };

std::string_view regime_name(Regime r);
std::optional<Regime> parse_regime(std::string_view name);

/// A and B1 share one rate/resource row, B2 and C2 another, C1 its own.
enum class RegimeFamily { ImmediateGate, HeraldedGate, FastHerald };
RegimeFamily regime_family(Regime r);

/// True when the swap gate waits for the herald (B2/C2).
inline bool waits_for_herald(Regime r) { return regime_family(r) == RegimeFamily::HeraldedGate; }

enum class Condition : int {
  HeraldAtLeastCommLifetime = 0, // T >= tau_o
  HeraldAtLeastGate = 1,         // T >= tau_g
  HeraldPlusGateExceedsLifetime = 2, // T + tau_g > tau_o
};

struct DecisionStep {
  Condition condition;
  bool holds;
};

struct Classification {
  Regime regime = Regime::A;
  std::vector<DecisionStep> path;
};

/// Walks the decision tree. Requires tau_o > tau_g.
Classification classify_regime_path(const TimingParams& timing, double heralding_time_s);
Regime classify_regime(const TimingParams& timing, double heralding_time_s);

/// Same tree expressed in clock steps (used by the simulator with integer j, k).
Regime classify_regime_steps(double k_steps, double j_steps, double comm_lifetime_steps);

/// Rate denominator in clock steps for a regime.
double denominator_steps(Regime r, double m, double j, double k);

/// Probability that each of the n+1 elementary links heralds at least once
/// in M*m attempts.
double block_success_probability(double p, std::int64_t spatial_mux, std::int64_t time_mux, std::int64_t n_repeaters);

struct IonRequirements {
  std::int64_t n_o = 0;
  std::int64_t n_m = 0;
  bool n_m_is_upper_bound = false;
};

IonRequirements ion_requirements(std::int64_t spatial_mux, std::int64_t time_mux, double j_steps, double k_steps,
                                 Regime regime);

struct RateReport {
  Regime regime = Regime::A;
  double p = 0.0;
  double block_success = 0.0;
  double denominator_steps = 0.0;
  double ideal_rate = 0.0; // ebits/s
  double f_end = 1.0;
  double rci = 1.0;
  double noisy_rate = 0.0; // ebits/s
  IonRequirements ions;
  DerivedTiming timing;
  bool q_out_of_domain = false;
};

/// Evaluates the regime-specific rate, RCI-scaled noisy rate and ion
/// requirements. Throws FeasibilityError when the memory lifetime cannot
/// cover the block.
RateReport evaluate_rate(const ChainLayout& layout, const HardwareProfile& hw);

/// As evaluate_rate, but with the link success probability supplied
/// directly instead of derived from the optics.
RateReport evaluate_rate_at_p(const ChainLayout& layout, const HardwareProfile& hw, double p);

/// Memory-lifetime check: tau_m >= margin * denominator * tau.
bool memory_feasible(const HardwareProfile& hw, double denominator_steps);

/// Repeaterless capacity -(M/tau) log2(1 - eta) in ebits/s.
double plob_bound(double eta, std::int64_t spatial_mux, double tau);

struct ReferenceRates {
  double r0 = 0.0; // no multiplexing
  double r1 = 0.0; // spatial only
  double r2 = 0.0; // temporal only
  double r = 0.0;  // both
};

ReferenceRates reference_rates(std::int64_t n, std::int64_t time_mux, std::int64_t spatial_mux, double p,
                               double q, double tau);

} // namespace ionrep
