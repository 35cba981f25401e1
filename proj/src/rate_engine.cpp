// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ionrep Authors

#include "rate_engine.hpp"

#include "errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace ionrep {

namespace {

// Ceiling that ignores round-off just above an integer (e.g. 2*M*k with k
// computed from a quotient).
std::int64_t tolerant_ceil(double x) {
  const double slack = 1e-9 * std::max(1.0, std::abs(x));
  return static_cast<std::int64_t>(std::ceil(x - slack));
}

Classification walk_tree(double herald, double gate, double lifetime) {
  Classification c;
  const bool slow_herald = herald >= lifetime;
  c.path.push_back({Condition::HeraldAtLeastCommLifetime, slow_herald});
  if (slow_herald) {
    c.regime = Regime::A;
    return c;
  }
  const bool herald_after_gate = herald >= gate;
  c.path.push_back({Condition::HeraldAtLeastGate, herald_after_gate});
  const bool tight = herald + gate > lifetime;
  c.path.push_back({Condition::HeraldPlusGateExceedsLifetime, tight});
  if (herald_after_gate)
    c.regime = tight ? Regime::B1 : Regime::B2;
  else
    c.regime = tight ? Regime::C1 : Regime::C2;
  return c;
}

} // namespace

std::string_view regime_name(Regime r) {
  static constexpr std::array<std::string_view, 5> names{"A", "B1", "B2", "C1", "C2"};
  return names[static_cast<std::size_t>(r)];
}

std::optional<Regime> parse_regime(std::string_view name) {
  for (int i = 0; i < 5; ++i) {
    const auto r = static_cast<Regime>(i);
    if (regime_name(r) == name) return r;
  }
  return std::nullopt;
}

RegimeFamily regime_family(Regime r) {
  switch (r) {
  case Regime::A:
  case Regime::B1:
    return RegimeFamily::ImmediateGate;
  case Regime::B2:
  case Regime::C2:
    return RegimeFamily::HeraldedGate;
  case Regime::C1:
    return RegimeFamily::FastHerald;
  }
  return RegimeFamily::ImmediateGate;
}

Classification classify_regime_path(const TimingParams& timing, double heralding_time_s) {
  if (!(timing.tau_o > timing.tau_g)) throw ParameterError("tau_o", "must exceed tau_g");
  if (!(heralding_time_s >= 0.0)) throw ParameterError("heralding_time", "must be >= 0");
  return walk_tree(heralding_time_s, timing.tau_g, timing.tau_o);
}

Regime classify_regime(const TimingParams& timing, double heralding_time_s) {
  return classify_regime_path(timing, heralding_time_s).regime;
}

Regime classify_regime_steps(double k_steps, double j_steps, double comm_lifetime_steps) {
  if (!(comm_lifetime_steps > j_steps)) throw ParameterError("tau_o", "must exceed tau_g");
  return walk_tree(k_steps, j_steps, comm_lifetime_steps).regime;
}

double denominator_steps(Regime r, double m, double j, double k) {
  switch (regime_family(r)) {
  case RegimeFamily::ImmediateGate:
    return k + m + 2.0 * j - 1.0;
  case RegimeFamily::HeraldedGate:
    return k + m + 3.0 * j - 1.0;
  case RegimeFamily::FastHerald:
    return m + 3.0 * j - 1.0;
  }
  return 0.0;
}

double block_success_probability(double p, std::int64_t spatial_mux, std::int64_t time_mux,
                                 std::int64_t n_repeaters) {
  // (1 - (1-p)^(M m))^(n+1), evaluated in log space for small p.
  const double attempts = static_cast<double>(spatial_mux) * static_cast<double>(time_mux);
  const double all_fail = std::exp(attempts * std::log1p(-p));
  return std::exp(static_cast<double>(n_repeaters + 1) * std::log1p(-all_fail));
}

IonRequirements ion_requirements(std::int64_t spatial_mux, std::int64_t time_mux, double j_steps, double k_steps,
                                 Regime regime) {
  const double M = static_cast<double>(spatial_mux);
  IonRequirements req;
  if (waits_for_herald(regime)) {
    req.n_o = tolerant_ceil(2.0 * (M * k_steps + j_steps));
    req.n_m = 2 * time_mux;
    req.n_m_is_upper_bound = false;
  } else {
    req.n_o = tolerant_ceil(2.0 * M * j_steps);
    req.n_m = 2 * spatial_mux * time_mux;
    req.n_m_is_upper_bound = true;
  }
  return req;
}

bool memory_feasible(const HardwareProfile& hw, double denominator) {
  return hw.timing.tau_m >= hw.memory_margin * denominator * hw.timing.tau;
}

RateReport evaluate_rate_at_p(const ChainLayout& layout, const HardwareProfile& hw, double p) {
  layout.validate();
  hw.validate();
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("p", "must lie in [0, 1]");

  RateReport rep;
  rep.p = p;
  rep.timing = derive_timing(layout, hw);
  rep.regime = classify_regime(hw.timing, rep.timing.heralding_time_s);
  rep.denominator_steps = denominator_steps(rep.regime, static_cast<double>(layout.time_mux), rep.timing.j_steps,
                                            rep.timing.k_steps);
  if (!memory_feasible(hw, rep.denominator_steps)) {
    std::ostringstream os;
    os << "memory lifetime: tau_m = " << hw.timing.tau_m << " s < " << hw.memory_margin << " x "
       << rep.denominator_steps << " steps x tau";
    throw FeasibilityError(os.str());
  }
  rep.block_success = block_success_probability(p, layout.spatial_mux, layout.time_mux, layout.n_repeaters);
  rep.ideal_rate = rep.block_success / (rep.denominator_steps * hw.timing.tau);

  const FidelityValue f = end_to_end_fidelity(layout.n_repeaters, hw.noise);
  rep.f_end = f.state.fidelity;
  rep.q_out_of_domain = f.out_of_domain;
  rep.rci = werner_rci(f.state);
  // Distillable entanglement is never negative.
  rep.noisy_rate = rep.rci > 0.0 ? rep.ideal_rate * rep.rci : 0.0;

  rep.ions = ion_requirements(layout.spatial_mux, layout.time_mux, rep.timing.j_steps, rep.timing.k_steps,
                              rep.regime);
  return rep;
}

RateReport evaluate_rate(const ChainLayout& layout, const HardwareProfile& hw) {
  layout.validate();
  hw.validate();
  return evaluate_rate_at_p(layout, hw, link_success_prob(hw.optical, layout.elementary_length_km()));
}

double plob_bound(double eta, std::int64_t spatial_mux, double tau) {
  if (!(eta > 0.0 && eta <= 1.0)) throw ParameterError("eta", "must lie in (0, 1)");
  if (eta == 1.0) throw ParameterError("eta", "capacity diverges at eta = 1");
  if (spatial_mux < 1) throw ParameterError("M", "must be >= 1");
  if (!(tau > 0.0)) throw ParameterError("tau", "must be > 0");
  return -static_cast<double>(spatial_mux) / tau * std::log1p(-eta) / std::log(2.0);
}

ReferenceRates reference_rates(std::int64_t n, std::int64_t time_mux, std::int64_t spatial_mux, double p,
                               double q, double tau) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("p", "must lie in [0, 1]");
  if (!(q >= 0.0 && q <= 1.0)) throw ParameterError("q", "must lie in [0, 1]");
  if (n < 0) throw ParameterError("n", "must be >= 0");
  if (time_mux < 1) throw ParameterError("m", "must be >= 1");
  if (spatial_mux < 1) throw ParameterError("M", "must be >= 1");
  if (!(tau > 0.0)) throw ParameterError("tau", "must be > 0");

  const double links = static_cast<double>(n + 1);
  const double swaps = std::pow(q, static_cast<double>(n));
  const double m = static_cast<double>(time_mux);
  auto any_success = [p](double attempts) { return 1.0 - std::pow(1.0 - p, attempts); };

  ReferenceRates r;
  r.r0 = std::pow(p, links) * swaps / tau;
  r.r1 = std::pow(any_success(static_cast<double>(spatial_mux)), links) * swaps / tau;
  r.r2 = std::pow(any_success(m), links) * swaps / (m * tau);
  r.r = std::pow(any_success(m * static_cast<double>(spatial_mux)), links) * swaps / (m * tau);
  return r;
}

} // namespace ionrep
