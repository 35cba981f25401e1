// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ionrep Authors

#include "optimizer.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace ionrep {

namespace {

struct Candidate {
  double rate = -1.0;
  std::int64_t n = -1;
  std::int64_t m = -1;

  bool valid() const { return n >= 0; }

  // Higher rate wins; ties go to smaller n then smaller m.
  bool better_than(const Candidate& o) const {
    if (!o.valid()) return valid();
    if (!valid()) return false;
    if (rate != o.rate) return rate > o.rate;
    if (n != o.n) return n < o.n;
    return m < o.m;
  }
};

enum Exclusion : int { kNoMax = 0, kNmMax, kMemory, kExclusionCount };

struct ScanAccumulator {
  Candidate best;          // satisfying every constraint
  Candidate unconstrained; // ignoring the ion caps
  std::int64_t evaluations = 0;
  std::int64_t excluded[kExclusionCount] = {};

  void merge(const ScanAccumulator& o) {
    if (o.best.better_than(best)) best = o.best;
    if (o.unconstrained.better_than(unconstrained)) unconstrained = o.unconstrained;
    evaluations += o.evaluations;
    for (int i = 0; i < kExclusionCount; ++i) excluded[i] += o.excluded[i];
  }
};

void scan_repeater_count(double total_km, std::int64_t n, std::int64_t spatial_mux, const HardwareProfile& hw,
                         const SearchBounds& bounds, const Constraints& c, ScanAccumulator& acc) {
  ChainLayout layout{total_km, n, spatial_mux, 1};
  const double p = link_success_prob(hw.optical, layout.elementary_length_km());
  const DerivedTiming timing = derive_timing(layout, hw);
  const Regime regime = classify_regime(hw.timing, timing.heralding_time_s);
  const double rci = werner_rci(end_to_end_fidelity(n, hw.noise).state);
  const std::int64_t n_o = ion_requirements(spatial_mux, 1, timing.j_steps, timing.k_steps, regime).n_o;
  const bool n_o_ok = !c.n_o_max || n_o <= *c.n_o_max;

  for (std::int64_t m = 1; m <= bounds.m_max; ++m) {
    ++acc.evaluations;
    const double den = denominator_steps(regime, static_cast<double>(m), timing.j_steps, timing.k_steps);
    if (!memory_feasible(hw, den)) {
      ++acc.excluded[kMemory];
      continue;
    }
    // Identical arithmetic to evaluate_rate_at_p so the reported optimum
    // reproduces bit for bit.
    const double block = block_success_probability(p, spatial_mux, m, n);
    const double ideal = block / (den * hw.timing.tau);
    const double noisy = rci > 0.0 ? ideal * rci : 0.0;
    const Candidate cand{noisy, n, m};
    if (cand.better_than(acc.unconstrained)) acc.unconstrained = cand;

    const std::int64_t n_m = ion_requirements(spatial_mux, m, timing.j_steps, timing.k_steps, regime).n_m;
    const bool n_m_ok = !c.n_m_max || n_m <= *c.n_m_max;
    if (!n_o_ok) ++acc.excluded[kNoMax];
    if (!n_m_ok) ++acc.excluded[kNmMax];
    if (!n_o_ok || !n_m_ok) continue;
    if (cand.better_than(acc.best)) acc.best = cand;
  }
}

} // namespace

void SearchBounds::validate() const {
  if (n_max < 0) throw ParameterError("n_max", "must be >= 0");
  if (m_max < 1) throw ParameterError("m_max", "must be >= 1");
}

void Constraints::validate() const {
  if (fixed_l0_km && fixed_n) throw ParameterError("fixed_l0_km", "at most one of fixed_l0_km / fixed_n may be set");
  if (n_o_max && *n_o_max <= 0) throw ParameterError("n_o_max", "must be > 0");
  if (n_m_max && *n_m_max <= 0) throw ParameterError("n_m_max", "must be > 0");
  if (fixed_l0_km && !(*fixed_l0_km > 0.0)) throw ParameterError("fixed_l0_km", "must be > 0");
  if (fixed_n && *fixed_n < 0) throw ParameterError("fixed_n", "must be >= 0");
  if (tau_min && !(*tau_min > 0.0)) throw ParameterError("tau_min", "must be > 0");
}

unsigned resolve_thread_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("IONREP_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::int64_t repeaters_for_spacing(double total_km, double l0_km) {
  if (!(l0_km > 0.0)) throw ParameterError("fixed_l0_km", "must be > 0");
  const auto links = static_cast<std::int64_t>(std::llround(total_km / l0_km));
  return std::max<std::int64_t>(0, links - 1);
}

OptimizationResult optimize_rate(double total_km, std::int64_t spatial_mux, const HardwareProfile& hw,
                                 const SearchBounds& bounds, const Constraints& constraints, unsigned threads) {
  if (!(total_km > 0.0)) throw ParameterError("L_km", "must be > 0");
  if (spatial_mux < 1) throw ParameterError("M", "must be >= 1");
  hw.validate();
  bounds.validate();
  constraints.validate();

  if (constraints.tau_min && hw.timing.tau < *constraints.tau_min)
    throw InfeasibleError("clock cycle tau is below tau_min", {"tau_min"});

  std::int64_t n_lo = 0;
  std::int64_t n_hi = bounds.n_max;
  const bool scanning_n = !constraints.fixed_n && !constraints.fixed_l0_km;
  if (constraints.fixed_n) n_lo = n_hi = *constraints.fixed_n;
  if (constraints.fixed_l0_km) n_lo = n_hi = repeaters_for_spacing(total_km, *constraints.fixed_l0_km);

  const std::int64_t count = n_hi - n_lo + 1;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::int64_t>(resolve_thread_count(threads), std::max<std::int64_t>(1, count)));

  // Contiguous n-ranges per worker; reduction below is order independent
  // because better_than is a strict total order on (rate, n, m).
  std::vector<ScanAccumulator> partial(workers);
  auto work = [&](unsigned w) {
    const std::int64_t begin = n_lo + count * w / workers;
    const std::int64_t end = n_lo + count * (w + 1) / workers;
    for (std::int64_t n = begin; n < end; ++n)
      scan_repeater_count(total_km, n, spatial_mux, hw, bounds, constraints, partial[w]);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  ScanAccumulator acc;
  for (const auto& part : partial) acc.merge(part);

  if (!acc.best.valid()) {
    std::vector<std::string> binding;
    if (acc.excluded[kNoMax] > 0) binding.emplace_back("n_o_max");
    if (acc.excluded[kNmMax] > 0) binding.emplace_back("n_m_max");
    if (acc.excluded[kMemory] > 0) binding.emplace_back("tau_m");
    std::ostringstream os;
    os << "no feasible (n, m) point at L = " << total_km << " km";
    if (!binding.empty()) {
      os << "; excluded by";
      for (const auto& b : binding) os << ' ' << b;
    }
    throw InfeasibleError(os.str(), std::move(binding));
  }

  OptimizationResult res;
  res.n_opt = acc.best.n;
  res.m_opt = acc.best.m;
  res.evaluations = acc.evaluations;
  res.report = evaluate_rate(ChainLayout{total_km, res.n_opt, spatial_mux, res.m_opt}, hw);
  res.boundary_hit.n = scanning_n && res.n_opt == bounds.n_max;
  res.boundary_hit.m = res.m_opt == bounds.m_max;

  if (acc.unconstrained.valid() && acc.unconstrained.better_than(acc.best)) {
    const ChainLayout free_layout{total_km, acc.unconstrained.n, spatial_mux, acc.unconstrained.m};
    const RateReport free_rep = evaluate_rate(free_layout, hw);
    if (constraints.n_o_max && free_rep.ions.n_o > *constraints.n_o_max) res.binding_constraints.emplace_back("n_o_max");
    if (constraints.n_m_max && free_rep.ions.n_m > *constraints.n_m_max) res.binding_constraints.emplace_back("n_m_max");
  }
  return res;
}

double direct_transmission_bound(double total_km, std::int64_t spatial_mux, const HardwareProfile& hw) {
  return plob_bound(transmissivity(hw.optical.alpha_db_per_km, total_km), spatial_mux, hw.timing.tau);
}

std::vector<SweepRow> sweep_distance(std::span<const double> distances_km, std::int64_t spatial_mux,
                                     const HardwareProfile& hw, const SearchBounds& bounds,
                                     const Constraints& constraints, unsigned threads) {
  if (distances_km.empty()) throw ParameterError("L_list", "must be nonempty");
  for (std::size_t i = 1; i < distances_km.size(); ++i)
    if (!(distances_km[i] > distances_km[i - 1])) throw ParameterError("L_list", "must be strictly increasing");

  std::vector<SweepRow> rows;
  rows.reserve(distances_km.size());
  for (const double L : distances_km) {
    SweepRow row;
    row.total_km = L;
    row.plob = direct_transmission_bound(L, spatial_mux, hw);
    try {
      row.result = optimize_rate(L, spatial_mux, hw, bounds, constraints, threads);
      row.feasible = true;
    } catch (const InfeasibleError& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> default_crossover_grid() {
  std::vector<double> grid;
  for (int L = 1; L <= 500; ++L) grid.push_back(static_cast<double>(L));
  return grid;
}

std::optional<double> crossover_distance(std::int64_t spatial_mux, const HardwareProfile& hw,
                                         const SearchBounds& bounds, std::span<const double> grid_km,
                                         unsigned threads) {
  if (grid_km.empty()) return std::nullopt;
  auto beats = [&](std::size_t i) {
    const double L = grid_km[i];
    try {
      const auto res = optimize_rate(L, spatial_mux, hw, bounds, Constraints{}, threads);
      return res.report.noisy_rate > direct_transmission_bound(L, spatial_mux, hw);
    } catch (const InfeasibleError&) {
      return false;
    }
  };
  std::size_t hi = grid_km.size() - 1;
  if (!beats(hi)) return std::nullopt;
  if (beats(0)) return grid_km[0];
  std::size_t lo = 0; // invariant: !beats(lo) && beats(hi)
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (beats(mid))
      hi = mid;
    else
      lo = mid;
  }
  return grid_km[hi];
}

} // namespace ionrep
