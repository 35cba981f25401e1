// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ionrep Authors

#pragma once

#include "model.hpp"
#include "rate_engine.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ionrep {

struct SearchBounds {
  std::int64_t n_max = 600;
  std::int64_t m_max = 2000;

  void validate() const;
};

struct Constraints {
  std::optional<std::int64_t> n_o_max;
  std::optional<std::int64_t> n_m_max;
  std::optional<double> fixed_l0_km;
  std::optional<std::int64_t> fixed_n;
  std::optional<double> tau_min; // seconds

  void validate() const;
};

struct BoundaryHit {
  bool n = false;
  bool m = false;

  bool any() const { return n || m; }
};

struct OptimizationResult {
  std::int64_t n_opt = 0;
  std::int64_t m_opt = 1;
  RateReport report;
  BoundaryHit boundary_hit;
  std::int64_t evaluations = 0;
  // Constraints that exclude the unconstrained optimum.
  std::vector<std::string> binding_constraints;
};

/// Repeater count implied by a nominal spacing: round(L / L0) - 1, floored at 0.
std::int64_t repeaters_for_spacing(double total_km, double l0_km);

/// Exhaustive (n, m) scan maximizing the noisy rate. Ties go to the smaller
/// n, then the smaller m. `threads == 0` uses the hardware concurrency.
/// Throws InfeasibleError when no grid point satisfies the constraints.
OptimizationResult optimize_rate(double total_km, std::int64_t spatial_mux, const HardwareProfile& hw,
                                 const SearchBounds& bounds, const Constraints& constraints,
                                 unsigned threads = 0);

struct SweepRow {
  double total_km = 0.0;
  double plob = 0.0;
  bool feasible = false;
  OptimizationResult result; // meaningful only when feasible
  std::string error;         // reason when infeasible
};

/// One optimization per distance. Infeasible distances become flagged rows.
std::vector<SweepRow> sweep_distance(std::span<const double> distances_km, std::int64_t spatial_mux,
                                     const HardwareProfile& hw, const SearchBounds& bounds,
                                     const Constraints& constraints, unsigned threads = 0);

/// PLOB bound of the bare fiber over the full distance.
double direct_transmission_bound(double total_km, std::int64_t spatial_mux, const HardwareProfile& hw);

/// 1, 2, ..., 500 km.
std::vector<double> default_crossover_grid();

/// Smallest grid distance at which the optimized noisy rate beats the PLOB
/// bound, found by bisection over the (increasing) grid. Empty when the
/// largest grid distance does not beat it.
std::optional<double> crossover_distance(std::int64_t spatial_mux, const HardwareProfile& hw,
                                         const SearchBounds& bounds, std::span<const double> grid_km,
                                         unsigned threads = 0);

unsigned resolve_thread_count(unsigned requested);

} // namespace ionrep
