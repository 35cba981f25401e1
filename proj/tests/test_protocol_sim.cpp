// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ionrep Authors

#include "errors.hpp"
#include "gen.hpp"
#include "oracle.hpp"
#include "protocol_sim.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

using namespace ionrep;

namespace {

SimConfig config(std::int64_t n, std::int64_t M, std::int64_t m, double p, std::int64_t j, std::int64_t k,
                 double lifetime = 50.0) {
  SimConfig c;
  c.n_repeaters = n;
  c.spatial_mux = M;
  c.time_mux = m;
  c.p = p;
  c.j_steps = j;
  c.k_steps = k;
  c.comm_lifetime_steps = lifetime;
  c.num_blocks = 20000;
  c.seed = 7;
  return c;
}

double binomial_z(const SimStats& s, double q) {
  const double sd = std::sqrt(q * (1.0 - q) / static_cast<double>(s.blocks_run));
  return (s.empirical_block_success - q) / sd;
}

RateReport analytic(const SimConfig& c) {
  RateReport r;
  r.regime = c.regime();
  r.block_success = static_cast<double>(oracle::block_success(c.p, c.spatial_mux, c.time_mux, c.n_repeaters));
  r.ions = ion_requirements(c.spatial_mux, c.time_mux, static_cast<double>(c.j_steps),
                            static_cast<double>(c.k_steps), r.regime);
  r.denominator_steps = denominator_steps(r.regime, static_cast<double>(c.time_mux), static_cast<double>(c.j_steps),
                                          static_cast<double>(c.k_steps));
  return r;
}

void expect_identical(const SimStats& a, const SimStats& b) {
  EXPECT_EQ(a.successes, b.successes);
  EXPECT_EQ(a.blocks_run, b.blocks_run);
  EXPECT_EQ(a.empirical_rate, b.empirical_rate);
  EXPECT_EQ(a.peak_comm_loaded, b.peak_comm_loaded);
  EXPECT_EQ(a.peak_mem_loaded, b.peak_mem_loaded);
  EXPECT_EQ(a.peak_heralded, b.peak_heralded);
  EXPECT_EQ(a.dropped_comm, b.dropped_comm);
  EXPECT_EQ(a.dropped_mem, b.dropped_mem);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i)
    EXPECT_EQ(format_trace_record(a.trace[i]), format_trace_record(b.trace[i]));
}

} // namespace

TEST(Simulate, CertainSuccess) {
  auto c = config(0, 1, 1, 1.0, 1, 1);
  c.num_blocks = 500;
  const auto s = run_protocol_sim(c);
  EXPECT_EQ(s.empirical_block_success, 1.0);
  EXPECT_EQ(s.successes, 500);
  auto chain = config(5, 1, 1, 1.0, 1, 60);
  EXPECT_EQ(run_protocol_sim(chain).empirical_block_success, 1.0);
}

TEST(Simulate, SmallChainMatchesAnalytic) {
  auto c = config(2, 2, 3, 0.3, 1, 2);
  c.num_blocks = 100000;
  const auto s = run_protocol_sim(c);
  const double expected = 0.686948448005089551;
  EXPECT_NEAR(static_cast<double>(oracle::block_success(0.3L, 2, 3, 2)), expected, 1e-15);
  EXPECT_LE(std::abs(binomial_z(s, expected)), 3.0);
}

TEST(Simulate, RegimeAOccupancy) {
  // k = 60 > tau_o / tau = 50.
  for (std::int64_t j : {1, 2, 3}) {
    auto c = config(2, 3, 5, 0.9, j, 60);
    ASSERT_EQ(c.regime(), Regime::A);
    const auto s = run_protocol_sim(c);
    EXPECT_EQ(s.peak_comm_loaded, 2 * j * 3);
    EXPECT_EQ(s.peak_heralded, 2 * 5);
    EXPECT_LE(s.peak_mem_loaded, 2 * 5 * 3);
  }
}

TEST(Simulate, RegimeB2Occupancy) {
  for (std::int64_t k : {1, 4, 9}) {
    auto c = config(2, 3, k + 2, 0.7, 1, k);
    ASSERT_EQ(c.regime(), Regime::B2);
    const auto s = run_protocol_sim(c);
    EXPECT_EQ(s.peak_comm_loaded, 2 * (3 * k + 1)) << "k=" << k;
    EXPECT_EQ(s.peak_heralded, 2 * c.time_mux);
    EXPECT_LE(s.peak_mem_loaded, 2 * c.time_mux);
  }
}

TEST(Simulate, OccupancyNeverExceedsRequirements) {
  gen::Source g(41);
  for (int i = 0; i < 60; ++i) {
    const auto j = g.integer(1, 4);
    const double lifetime = static_cast<double>(j) + g.uniform(0.5, 30.0);
    auto c = config(g.integer(0, 3), g.integer(1, 4), g.integer(1, 12), g.uniform(0.05, 0.95), j,
                    g.integer(0, 40), lifetime);
    c.num_blocks = 2000;
    const auto s = run_protocol_sim(c);
    const auto req = integer_ion_requirements(c);
    EXPECT_LE(s.peak_comm_loaded, req.n_o) << regime_name(s.regime);
    EXPECT_LE(s.peak_mem_loaded, req.n_m) << regime_name(s.regime);
    EXPECT_EQ(s.dropped_comm, 0);
    EXPECT_EQ(s.dropped_mem, 0);
  }
}

TEST(Simulate, PoolsAtRequirementCauseNoDrops) {
  gen::Source g(42);
  for (int i = 0; i < 40; ++i) {
    const auto j = g.integer(1, 3);
    const double lifetime = static_cast<double>(j) + g.uniform(0.5, 25.0);
    auto c = config(g.integer(0, 3), g.integer(1, 3), g.integer(1, 8), g.uniform(0.1, 0.9), j, g.integer(0, 30),
                    lifetime);
    c.num_blocks = 3000;
    const auto unlimited = run_protocol_sim(c);
    const auto req = integer_ion_requirements(c);
    c.n_comm_ions = req.n_o;
    c.n_mem_ions = req.n_m;
    const auto pooled = run_protocol_sim(c);
    EXPECT_EQ(pooled.dropped_comm, 0);
    EXPECT_EQ(pooled.dropped_mem, 0);
    EXPECT_EQ(pooled.successes, unlimited.successes);
  }
}

TEST(Simulate, UndersizedPoolsDropAttempts) {
  auto c = config(1, 4, 6, 0.5, 1, 5);
  c.n_comm_ions = 6;
  c.n_mem_ions = 3;
  const auto s = run_protocol_sim(c);
  EXPECT_GT(s.dropped_comm, 0);
  EXPECT_LE(s.peak_comm_loaded, 6);
  EXPECT_LE(s.peak_mem_loaded, 3);
  EXPECT_LT(s.empirical_block_success, static_cast<double>(oracle::block_success(0.5L, 4, 6, 1)));
}

TEST(Simulate, WallTimeEqualsIntegerDenominator) {
  struct Case {
    std::int64_t j, k;
    double lifetime;
    Regime regime;
  };
  const Case cases[] = {{1, 60, 50.0, Regime::A},  {2, 12, 13.0, Regime::B1}, {1, 8, 50.0, Regime::B2},
                        {10, 7, 15.0, Regime::C1}, {10, 2, 15.0, Regime::C2}};
  for (const auto& cs : cases) {
    for (std::int64_t m : {1, 4, 17}) {
      auto c = config(1, 2, m, 0.5, cs.j, cs.k, cs.lifetime);
      c.num_blocks = 10;
      ASSERT_EQ(c.regime(), cs.regime);
      const auto s = run_protocol_sim(c);
      const auto expected = static_cast<std::int64_t>(std::llround(static_cast<double>(
          oracle::denominator(std::string(regime_name(cs.regime)), m, cs.j, cs.k))));
      EXPECT_EQ(s.block_wall_steps, expected) << regime_name(cs.regime) << " m=" << m;
      EXPECT_NEAR(s.empirical_rate, s.empirical_block_success / (expected * c.tau), 1e-9);
    }
  }
}

TEST(Simulate, SeedDeterminismAcrossThreads) {
  auto c = config(3, 3, 5, 0.3, 2, 6);
  c.num_blocks = 10000;
  c.trace_blocks = 3;
  c.threads = 1;
  const auto a = run_protocol_sim(c);
  expect_identical(a, run_protocol_sim(c));
  for (unsigned t : {2u, 5u}) {
    c.threads = t;
    expect_identical(a, run_protocol_sim(c));
  }
  c.seed = 8;
  EXPECT_NE(run_protocol_sim(c).successes, a.successes);
}

TEST(Simulate, TraceOccupancyMatchesPeaks) {
  auto c = config(2, 3, 5, 0.9, 2, 60);
  c.num_blocks = 200;
  c.trace_blocks = 200;
  const auto s = run_protocol_sim(c);
  ASSERT_FALSE(s.trace.empty());
  std::int64_t comm = 0, heralded = 0;
  std::map<std::string, int> kinds;
  for (const auto& r : s.trace) {
    ++kinds[std::string(trace_event_name(r.event))];
    if (r.event == TraceEvent::CommLoaded) comm = std::max(comm, r.count);
    if (r.event == TraceEvent::Heralded) heralded = std::max(heralded, r.count);
  }
  EXPECT_EQ(comm, s.peak_comm_loaded);
  EXPECT_EQ(heralded, s.peak_heralded);
  EXPECT_EQ(comm, 12);
  for (const char* k : {"init", "comm_release", "mem_load", "herald", "swap", "clear"}) EXPECT_GT(kinds[k], 0) << k;
  EXPECT_EQ(kTraceHeader, "block,step,node,event,count");
  EXPECT_EQ(format_trace_record({4, 7, 2, TraceEvent::MemLoad, 3}), "4,7,2,mem_load,3");
}

TEST(Simulate, ConfigFromLayoutQuantizesUp) {
  HardwareProfile hw;
  const auto c = make_sim_config(ChainLayout{150.0, 87, 10, 22}, hw);
  EXPECT_EQ(c.j_steps, 1);
  EXPECT_EQ(c.k_steps, 9);
  EXPECT_EQ(c.regime(), Regime::B2);
  EXPECT_NEAR(c.p, link_success_prob(hw.optical, 150.0 / 88.0), 0.0);
  const auto o = make_sim_config(ChainLayout{150.0, 87, 10, 22}, hw, 0.4);
  EXPECT_EQ(o.p, 0.4);
  // T exactly 4 tau stays 4 steps.
  const auto e = make_sim_config(ChainLayout{3.0 * 4e-6 * 299792.458 / 1.47, 2, 3, 6}, hw);
  EXPECT_EQ(e.k_steps, 4);
}

TEST(Simulate, RejectsBadConfig) {
  auto c = config(1, 1, 1, 0.5, 1, 1);
  c.num_blocks = 0;
  EXPECT_THROW(run_protocol_sim(c), ParameterError);
  c = config(1, 1, 1, 1.5, 1, 1);
  EXPECT_THROW(run_protocol_sim(c), ParameterError);
  c = config(1, 1, 1, 0.5, 5, 1, 4.0);
  EXPECT_THROW(run_protocol_sim(c), ParameterError);
}

TEST(Validate, MatchedConfigPasses) {
  auto c = config(2, 2, 3, 0.3, 1, 2);
  c.num_blocks = 50000;
  const auto v = validate_against_analytic(c, analytic(c), 3.0);
  EXPECT_TRUE(v.pass) << (v.failures.empty() ? "" : v.failures[0]);
  EXPECT_LE(std::abs(v.z_score), 3.0);
  EXPECT_EQ(v.n_o_quantization_delta, 0);
  EXPECT_EQ(v.quantization_delta_steps, 0.0);
}

TEST(Validate, MismatchedProbabilityFails) {
  auto c = config(2, 2, 3, 0.3, 1, 2);
  c.num_blocks = 50000;
  auto rep = analytic(c);
  c.p = 0.2;
  const auto v = validate_against_analytic(c, rep, 3.0);
  EXPECT_FALSE(v.pass);
  EXPECT_FALSE(v.success_ok);
  EXPECT_GT(std::abs(v.z_score), 3.0);
  EXPECT_FALSE(v.failures.empty());
}

TEST(Validate, RealValuedReportQuantizationDelta) {
  HardwareProfile hw;
  const ChainLayout layout{150.0, 87, 10, 22};
  auto c = make_sim_config(layout, hw);
  c.num_blocks = 2000;
  const auto v = validate_against_analytic(c, evaluate_rate(layout, hw), 3.0);
  EXPECT_GT(v.quantization_delta_steps, 0.0);
  EXPECT_LE(v.quantization_delta_steps, 2.0);
  EXPECT_EQ(v.expected_n_o, 2 * (10 * 9 + 1));
  EXPECT_EQ(v.analytic_n_o, 170);
  EXPECT_EQ(v.n_o_quantization_delta, 12);
}

TEST(SampleQ, Examples) {
  EXPECT_EQ(sample_end_to_end_Q(50, NoiseParams{1.0, 0.0}, 10000, 1).q, 0.0);
  EXPECT_EQ(sample_end_to_end_Q(0, NoiseParams{0.9, 0.01}, 10000, 1).q, 0.0);
  const NoiseParams nz{1.0 - 1e-3, 1e-3};
  const auto est = sample_end_to_end_Q(10, nz, 1000000, 99);
  const double q = static_cast<double>(oracle::q_of_n(10, 1e-3L, nz.f0));
  const double sd = std::sqrt(q * (1.0 - q) / 1e6);
  EXPECT_LE(std::abs(est.q - q), 3.0 * sd);
  EXPECT_TRUE(sample_end_to_end_Q(2, NoiseParams{1.0, 0.7}, 10, 1).out_of_domain);
}
