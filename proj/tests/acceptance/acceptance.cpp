// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ionrep Authors
//
// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include "errors.hpp"
#include "gen.hpp"
#include "model.hpp"
#include "optimizer.hpp"
#include "oracle.hpp"
#include "protocol_sim.hpp"
#include "rate_engine.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace ionrep;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

HardwareProfile baseline(double eps = 1e-4) {
  HardwareProfile hw;
  hw.noise = NoiseParams{1.0 - eps, eps};
  return hw;
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [miss]");
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool within_rel(double v, double target, double rel) { return std::abs(v - target) <= rel * target; }

// ---- 1 ----------------------------------------------------------------------
Outcome headline_rate() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto res = optimize_rate(150.0, 10, baseline(), SearchBounds{600, 2000}, Constraints{});
  const double dt = seconds_since(t0);
  const auto ref = oracle::evaluate(oracle::Hw{}, 150.0L, res.n_opt, 10, res.m_opt);
  o.check(within_rel(res.report.noisy_rate, 20000.0, 0.15),
          "noisy rate " + fmt("%.1f", res.report.noisy_rate) + " ebits/s vs 20000 +/- 15%");
  o.check(std::abs(res.report.noisy_rate - static_cast<double>(ref.noisy)) <= 1e-9 * res.report.noisy_rate,
          "oracle agrees");
  o.check(!res.boundary_hit.any(), "interior optimum");
  o.check(dt < 60.0, "grid scan " + fmt("%.2f", dt) + " s < 60 s");
  return o;
}

// ---- 2 ----------------------------------------------------------------------
Outcome optimal_repeater_count() {
  Outcome o;
  const auto a = optimize_rate(150.0, 10, baseline(1e-4), SearchBounds{}, Constraints{});
  const auto b = optimize_rate(150.0, 10, baseline(1e-3), SearchBounds{}, Constraints{});
  o.check(std::llabs(a.n_opt - 87) <= 5, "eps_g=1e-4: n_opt " + std::to_string(a.n_opt) + " vs 87 +/- 5");
  o.check(std::llabs(b.n_opt - 25) <= 5, "eps_g=1e-3: n_opt " + std::to_string(b.n_opt) + " vs 25 +/- 5");
  return o;
}

// ---- 3 ----------------------------------------------------------------------
Outcome multiplexing_product() {
  Outcome o;
  for (double eps : {1e-4, 0.0}) {
    for (int M : {1, 5, 10}) {
      const auto r = optimize_rate(150.0, M, baseline(eps), SearchBounds{}, Constraints{});
      const auto product = r.m_opt * M;
      o.check(std::abs(static_cast<double>(product) - 220.0) <= 22.0,
              "eps_g=" + fmt("%g", eps) + " M=" + std::to_string(M) + ": m_opt*M " + std::to_string(product));
    }
  }
  return o;
}

// ---- 4 ----------------------------------------------------------------------
Outcome resource_counts() {
  Outcome o;
  const auto base = optimize_rate(150.0, 10, baseline(), SearchBounds{}, Constraints{});
  o.check(std::llabs(base.report.ions.n_o - 170) <= 2,
          "N_o " + std::to_string(base.report.ions.n_o) + " vs 170 +/- 2");
  HardwareProfile slow_gate = baseline();
  slow_gate.timing.tau_g = 10e-6;
  const auto slow = optimize_rate(150.0, 10, slow_gate, SearchBounds{}, Constraints{});
  o.check(std::llabs(slow.report.ions.n_o - 220) <= 2,
          "tau_g=10us: N_o " + std::to_string(slow.report.ions.n_o) + " vs 220 +/- 2 (n_opt " +
              std::to_string(slow.n_opt) + ", k " + fmt("%.3f", slow.report.timing.k_steps) + ")");
  o.check(within_rel(static_cast<double>(base.report.ions.n_m), 55.0, 0.25),
          "N_m " + std::to_string(base.report.ions.n_m) + " vs 55 +/- 25%");
  return o;
}

// ---- 5 ----------------------------------------------------------------------
Outcome plob_crossing() {
  Outcome o;
  const HardwareProfile hw = baseline();
  const auto res = optimize_rate(150.0, 10, hw, SearchBounds{}, Constraints{});
  const double plob = direct_transmission_bound(150.0, 10, hw);
  o.check(std::abs(plob - 14430.0) <= 10.0, "PLOB " + fmt("%.1f", plob));
  o.check(res.report.noisy_rate > plob, "rate " + fmt("%.1f", res.report.noisy_rate) + " > PLOB");
  const auto cross = crossover_distance(10, hw, SearchBounds{}, default_crossover_grid());
  o.check(cross.has_value() && *cross < 150.0,
          "crossover " + (cross ? fmt("%.0f", *cross) + " km" : std::string("none")) + " < 150 km");
  return o;
}

// ---- 6 ----------------------------------------------------------------------
Outcome fixed_spacing() {
  Outcome o;
  const HardwareProfile hw = baseline();
  const auto free = optimize_rate(150.0, 10, hw, SearchBounds{}, Constraints{});
  Constraints c;
  c.fixed_l0_km = 20.0;
  const auto fixed = optimize_rate(150.0, 10, hw, SearchBounds{}, c);
  const double ratio = fixed.report.noisy_rate / free.report.noisy_rate;
  o.check(std::abs(ratio - 0.25) <= 0.10,
          "ratio " + fmt("%.3f", ratio) + " (n=" + std::to_string(fixed.n_opt) + ") vs 0.25 +/- 0.10");
  return o;
}

// ---- 7 ----------------------------------------------------------------------
Outcome mc_oracle() {
  Outcome o;
  const auto t0 = Clock::now();
  int configs = 0, within = 0;
  double worst = 0.0;
  std::string worst_cfg;
  for (std::int64_t n = 0; n <= 3; ++n)
    for (std::int64_t M = 1; M <= 3; ++M)
      for (std::int64_t m = 1; m <= 5; ++m)
        for (double p : {0.1, 0.3, 0.5}) {
          SimConfig c;
          c.n_repeaters = n;
          c.spatial_mux = M;
          c.time_mux = m;
          c.p = p;
          c.j_steps = 1;
          c.k_steps = 2;
          c.comm_lifetime_steps = 50.0;
          c.num_blocks = 100000;
          c.seed = 20261016;
          const auto s = run_protocol_sim(c);
          const double q = static_cast<double>(oracle::block_success(p, M, m, n));
          const double sd = std::sqrt(q * (1.0 - q) / static_cast<double>(s.blocks_run));
          const double diff = std::abs(s.empirical_block_success - q);
          const double z = sd > 0.0 ? diff / sd : (diff == 0.0 ? 0.0 : INFINITY);
          ++configs;
          if (z <= 3.0) ++within;
          if (z > worst) {
            worst = z;
            worst_cfg = "n=" + std::to_string(n) + " M=" + std::to_string(M) + " m=" + std::to_string(m) +
                        " p=" + fmt("%g", p);
          }
        }
  const double dt = seconds_since(t0);
  o.check(within == configs, std::to_string(within) + "/" + std::to_string(configs) + " within 3 sigma (max |z| " +
                                 fmt("%.2f", worst) + " at " + worst_cfg + ")");
  o.check(dt < 30.0, "runtime " + fmt("%.2f", dt) + " s < 30 s");
  return o;
}

// ---- 8 ----------------------------------------------------------------------
Outcome occupancy_replay() {
  Outcome o;
  {
    // Regime A: tau_g = 2 us, 12 km links (T > tau_o = 50 us).
    HardwareProfile hw = baseline();
    hw.timing.tau_g = 2e-6;
    const ChainLayout layout{36.0, 2, 3, 5};
    auto c = make_sim_config(layout, hw, 0.9);
    c.num_blocks = 20000;
    const auto s = run_protocol_sim(c);
    const auto rep = evaluate_rate(layout, hw);
    o.check(s.regime == Regime::A && rep.regime == Regime::A, "regime A");
    o.check(s.peak_comm_loaded == 2 * c.j_steps * c.spatial_mux,
            "A: peak comm " + std::to_string(s.peak_comm_loaded) + " == 2jM " +
                std::to_string(2 * c.j_steps * c.spatial_mux));
    o.check(s.peak_heralded == 2 * c.time_mux,
            "A: peak heralded " + std::to_string(s.peak_heralded) + " == 2m " + std::to_string(2 * c.time_mux));
    o.check(s.peak_mem_loaded <= 2 * c.time_mux * c.spatial_mux, "A: peak memory <= 2mM");
  }
  auto b2_case = [&o](const char* label, const ChainLayout& layout) {
    const HardwareProfile hw = baseline();
    auto c = make_sim_config(layout, hw, 0.7);
    c.num_blocks = 20000;
    const auto s = run_protocol_sim(c);
    const auto rep = evaluate_rate(layout, hw);
    const auto v = validate_against_analytic(c, s, evaluate_rate_at_p(layout, hw, 0.7), 3.0);
    const std::int64_t integer_count = 2 * (c.spatial_mux * c.k_steps + c.j_steps);
    o.check(s.regime == Regime::B2 && rep.regime == Regime::B2, std::string(label) + ": regime B2");
    o.check(s.peak_comm_loaded == integer_count, std::string(label) + ": peak comm " +
                                                     std::to_string(s.peak_comm_loaded) + " == 2(Mk+j) " +
                                                     std::to_string(integer_count) + " (k=" +
                                                     std::to_string(c.k_steps) + ")");
    const auto delta = std::llabs(integer_count - rep.ions.n_o);
    o.check(delta <= 2, std::string(label) + ": delta vs real-k N_o " + std::to_string(rep.ions.n_o) + " is " +
                            std::to_string(delta));
    o.check(s.peak_heralded == 2 * c.time_mux, std::string(label) + ": peak heralded " +
                                                   std::to_string(s.peak_heralded) + " == 2m");
    o.check(v.pass, std::string(label) + ": validator pass (z " + fmt("%.2f", v.z_score) + ")");
  };
  // T = 4 tau exactly on 4*c/n_ref km links.
  b2_case("B2 M=3", ChainLayout{3.0 * 4e-6 * kSpeedOfLightKmPerS / 1.47, 2, 3, 6});
  // Headline link spacing (k = 8.36 real, 9 integer) with a single mode.
  b2_case("B2 M=1", ChainLayout{150.0, 87, 1, 12});
  return o;
}

// ---- 9 ----------------------------------------------------------------------
Outcome property_suites() {
  Outcome o;
  gen::Source g(9);

  double worst_q = 0.0;
  for (int c = 0; c < 50; ++c) {
    const NoiseParams nz{g.uniform(0.75, 1.0), g.uniform(0.0, 0.2)};
    const double x = hop_survival_factor(nz);
    for (std::int64_t n1 = 0; n1 <= 20; ++n1)
      for (std::int64_t n2 = 0; n2 <= 20; ++n2) {
        const double lhs = 1.0 - 2.0 * end_to_end_Q(n1 + n2 + 1, nz).q;
        const double rhs = (1.0 - 2.0 * end_to_end_Q(n1, nz).q) * (1.0 - 2.0 * end_to_end_Q(n2, nz).q) * x;
        worst_q = std::max(worst_q, std::abs(lhs - rhs));
      }
  }
  o.check(worst_q <= 1e-12, "Q composition max err " + fmt("%.1e", worst_q));

  double worst_swap = 0.0;
  for (int c = 0; c < 2000; ++c) {
    const double f = g.uniform(0.0, 1.0), e1 = g.uniform(0.0, 1.0), e2 = g.uniform(0.0, 1.0);
    const double two = apply_swap_gate_noise(apply_swap_gate_noise({f}, e1), e2).fidelity;
    const double one = apply_swap_gate_noise({f}, 1.0 - (1.0 - e1) * (1.0 - e2)).fidelity;
    worst_swap = std::max(worst_swap, std::abs(two - one));
  }
  o.check(worst_swap <= 1e-12, "swap-noise composition max err " + fmt("%.1e", worst_swap));

  bool monotone = true;
  double prev = werner_rci({0.25});
  for (int i = 1; i <= 100000; ++i) {
    const double cur = werner_rci({0.25 + 0.75 * i / 100000.0});
    monotone = monotone && cur > prev;
    prev = cur;
  }
  double lo = 0.25, hi = 1.0;
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    (werner_rci({mid}) > 0.0 ? hi : lo) = mid;
  }
  const double f_star = 0.5 * (lo + hi);
  o.check(monotone, "RCI strictly increasing on (1/4, 1]");
  o.check(f_star > 0.25 && f_star < 1.0 && std::abs(static_cast<double>(oracle::rci(f_star))) < 1e-12,
          "RCI zero at F* = " + fmt("%.10f", f_star));

  bool invariant = true;
  const HardwareProfile base = baseline();
  const auto ref = optimize_rate(150.0, 10, base, SearchBounds{}, Constraints{});
  for (double c : {2.0, 4.0, 8.0}) {
    HardwareProfile hw = base;
    hw.timing.tau *= c;
    hw.timing.tau_g *= c;
    hw.timing.tau_o *= c;
    hw.timing.tau_m *= c;
    hw.optical.refractive_index *= c;
    const auto r = optimize_rate(150.0, 10, hw, SearchBounds{}, Constraints{});
    invariant = invariant && r.n_opt == ref.n_opt && r.m_opt == ref.m_opt &&
                std::abs(r.report.noisy_rate * c - ref.report.noisy_rate) <= 1e-12 * ref.report.noisy_rate;
  }
  o.check(invariant, "argmax invariant under time rescaling");

  SimConfig c;
  c.n_repeaters = 3;
  c.spatial_mux = 3;
  c.time_mux = 5;
  c.p = 0.3;
  c.j_steps = 2;
  c.k_steps = 6;
  c.num_blocks = 20000;
  c.seed = 42;
  c.trace_blocks = 2;
  c.threads = 1;
  const auto a = run_protocol_sim(c);
  c.threads = 4;
  const auto b = run_protocol_sim(c);
  bool same = a.successes == b.successes && a.empirical_rate == b.empirical_rate &&
              a.peak_comm_loaded == b.peak_comm_loaded && a.trace.size() == b.trace.size();
  for (std::size_t i = 0; same && i < a.trace.size(); ++i)
    same = format_trace_record(a.trace[i]) == format_trace_record(b.trace[i]);
  const auto opt1 = optimize_rate(120.0, 5, base, SearchBounds{}, Constraints{}, 1);
  const auto opt4 = optimize_rate(120.0, 5, base, SearchBounds{}, Constraints{}, 4);
  same = same && opt1.n_opt == opt4.n_opt && opt1.m_opt == opt4.m_opt &&
         opt1.report.noisy_rate == opt4.report.noisy_rate;
  o.check(same, "bit-identical reruns across thread counts");
  return o;
}

} // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "headline rate", headline_rate},
      {2, "optimal repeater count", optimal_repeater_count},
      {3, "multiplexing product", multiplexing_product},
      {4, "resource counts", resource_counts},
      {5, "PLOB crossing", plob_crossing},
      {6, "fixed-spacing degradation", fixed_spacing},
      {7, "Monte Carlo vs analytic", mc_oracle},
      {8, "occupancy replay", occupancy_replay},
      {9, "property suites", property_suites},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
