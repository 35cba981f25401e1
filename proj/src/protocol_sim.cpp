// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ionrep Authors

#include "protocol_sim.hpp"

#include "errors.hpp"
#include "optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

namespace ionrep {

namespace {

constexpr std::int64_t kChunkBlocks = 1024;
constexpr std::int64_t kUnlimited = std::numeric_limits<std::int64_t>::max() / 4;
constexpr int kEventKinds = static_cast<int>(TraceEvent::Heralded) + 1;

std::int64_t steps_ceil(double x) {
  const double slack = 1e-9 * std::max(1.0, std::abs(x));
  return static_cast<std::int64_t>(std::ceil(x - slack));
}

// 53-bit uniform in [0, 1).
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

struct ChunkTotals {
  std::int64_t blocks = 0;
  std::int64_t successes = 0;
  std::int64_t peak_comm = 0;
  std::int64_t peak_mem = 0;
  std::int64_t peak_heralded = 0;
  std::int64_t dropped_comm = 0;
  std::int64_t dropped_mem = 0;
  std::vector<TraceRecord> trace;
};

// Replays one block on the integer clock. Attempts for elementary link l
// at step t form a "group"; node l holds its right-hand half and node
// l + 1 its left-hand half.
class BlockRunner {
public:
  explicit BlockRunner(const SimConfig& cfg)
      : cfg_(cfg), regime_(cfg.regime()), heralded_gate_(waits_for_herald(regime_)), M_(cfg.spatial_mux),
        m_(cfg.time_mux), j_(cfg.j_steps), k_(cfg.k_steps), links_(cfg.n_repeaters + 1),
        nodes_(cfg.n_repeaters + 2) {
    const std::int64_t latency = heralded_gate_ ? k_ + j_ : std::max(j_, k_);
    ready_ = (m_ - 1) + latency;
    const auto groups = static_cast<std::size_t>(links_ * m_);
    alloc_r_.resize(groups);
    alloc_l_.resize(groups);
    mem_r_.resize(groups);
    mem_l_.resize(groups);
    kept_.resize(groups);
    success_.resize(groups * static_cast<std::size_t>(M_));
    stored_.resize(static_cast<std::size_t>(links_));
    comm_.resize(static_cast<std::size_t>(nodes_));
    mem_.resize(static_cast<std::size_t>(nodes_));
    heralded_.resize(static_cast<std::size_t>(nodes_));
    comm_pool_ = cfg.n_comm_ions > 0 ? cfg.n_comm_ions : kUnlimited;
    mem_pool_ = cfg.n_mem_ions > 0 ? cfg.n_mem_ions : kUnlimited;
  }

  bool run(std::mt19937_64& rng, std::int64_t block, bool traced, ChunkTotals& tot) {
    rng_ = &rng;
    tot_ = &tot;
    tracing_ = traced;
    block_ = block;
    std::fill(stored_.begin(), stored_.end(), 0);
    std::fill(comm_.begin(), comm_.end(), 0);
    std::fill(mem_.begin(), mem_.end(), 0);
    std::fill(heralded_.begin(), heralded_.end(), 0);
    if (tracing_) events_.assign(static_cast<std::size_t>(nodes_ * kEventKinds), 0);

    for (std::int64_t s = 0; s <= ready_; ++s) {
      if (heralded_gate_) {
        for_groups_started_at(s - k_ - j_, [this](std::size_t g, std::int64_t l) { gate_complete(g, l); });
        if (k_ >= 1) for_groups_started_at(s - k_, [this](std::size_t g, std::int64_t l) { herald(g, l); });
        if (s < m_) initialize(s);
        if (k_ == 0) for_groups_started_at(s, [this](std::size_t g, std::int64_t l) { herald(g, l); });
      } else {
        if (k_ > j_) for_groups_started_at(s - k_, [this](std::size_t g, std::int64_t l) { decide(g, l); });
        for_groups_started_at(s - j_, [this](std::size_t g, std::int64_t l) {
          load(g, l);
          if (k_ <= j_) decide(g, l);
        });
        if (s < m_) initialize(s);
      }
      end_step(s);
    }

    const bool success = std::all_of(stored_.begin(), stored_.end(), [](std::uint8_t v) { return v != 0; });
    if (tracing_) {
      tot.trace.push_back({block_, ready_, 0, TraceEvent::Swap, success ? 1 : 0});
      for (std::int64_t node = 0; node < nodes_; ++node)
        if (mem_[node] > 0) tot.trace.push_back({block_, ready_, node, TraceEvent::Clear, mem_[node]});
    }
    return success;
  }

private:
  template <class F>
  void for_groups_started_at(std::int64_t t, F&& f) {
    if (t < 0 || t >= m_) return;
    for (std::int64_t l = 0; l < links_; ++l) f(static_cast<std::size_t>(t * links_ + l), l);
  }

  void note(std::int64_t node, TraceEvent e, std::int64_t count) {
    if (tracing_ && count != 0) events_[static_cast<std::size_t>(node * kEventKinds + static_cast<int>(e))] += count;
  }

  std::int64_t take(std::vector<std::int64_t>& busy, std::int64_t pool, std::int64_t node, std::int64_t want) {
    const std::int64_t got = std::min(want, std::max<std::int64_t>(0, pool - busy[node]));
    busy[node] += got;
    return got;
  }

  void initialize(std::int64_t t) {
    for (std::int64_t l = 0; l < links_; ++l) {
      const auto g = static_cast<std::size_t>(t * links_ + l);
      const std::int64_t right = take(comm_, comm_pool_, l, M_);
      const std::int64_t left = take(comm_, comm_pool_, l + 1, M_);
      alloc_r_[g] = right;
      alloc_l_[g] = left;
      tot_->dropped_comm += (M_ - right) + (M_ - left);
      note(l, TraceEvent::Init, right);
      note(l + 1, TraceEvent::Init, left);
      note(l, TraceEvent::DropComm, M_ - right);
      note(l + 1, TraceEvent::DropComm, M_ - left);

      const std::int64_t attempted = std::min(right, left);
      std::uint8_t* succ = &success_[g * static_cast<std::size_t>(M_)];
      for (std::int64_t mode = 0; mode < M_; ++mode)
        succ[mode] = mode < attempted && uniform01(*rng_) < cfg_.p ? 1 : 0;
    }
  }

  // Lowest-index successful mode below `limit`, or -1.
  std::int64_t first_success(std::size_t g, std::int64_t limit) const {
    const std::uint8_t* succ = &success_[g * static_cast<std::size_t>(M_)];
    for (std::int64_t mode = 0; mode < limit; ++mode)
      if (succ[mode]) return mode;
    return -1;
  }

  // Immediate-gate regimes: the swap gate runs right after emission and the
  // state lands in memory j steps later, whether or not it heralds.
  void load(std::size_t g, std::int64_t l) {
    comm_[l] -= alloc_r_[g];
    comm_[l + 1] -= alloc_l_[g];
    note(l, TraceEvent::CommRelease, alloc_r_[g]);
    note(l + 1, TraceEvent::CommRelease, alloc_l_[g]);
    mem_r_[g] = take(mem_, mem_pool_, l, alloc_r_[g]);
    mem_l_[g] = take(mem_, mem_pool_, l + 1, alloc_l_[g]);
    tot_->dropped_mem += (alloc_r_[g] - mem_r_[g]) + (alloc_l_[g] - mem_l_[g]);
    note(l, TraceEvent::MemLoad, mem_r_[g]);
    note(l + 1, TraceEvent::MemLoad, mem_l_[g]);
    note(l, TraceEvent::DropMem, alloc_r_[g] - mem_r_[g]);
    note(l + 1, TraceEvent::DropMem, alloc_l_[g] - mem_l_[g]);
  }

  // Herald known and states in memory: keep one pair, free the rest.
  void decide(std::size_t g, std::int64_t l) {
    const std::int64_t mode = first_success(g, std::min(mem_r_[g], mem_l_[g]));
    const std::int64_t keep = mode >= 0 ? 1 : 0;
    kept_[g] = static_cast<std::uint8_t>(keep);
    mem_[l] -= mem_r_[g] - keep;
    mem_[l + 1] -= mem_l_[g] - keep;
    note(l, TraceEvent::MemRelease, mem_r_[g] - keep);
    note(l + 1, TraceEvent::MemRelease, mem_l_[g] - keep);
    if (keep) store(l);
  }

  // Heralded-gate regimes: comm ions wait for the herald; only the kept
  // pair is gated into memory.
  void herald(std::size_t g, std::int64_t l) {
    const std::int64_t mode = first_success(g, std::min(alloc_r_[g], alloc_l_[g]));
    const std::int64_t keep = mode >= 0 ? 1 : 0;
    kept_[g] = static_cast<std::uint8_t>(keep);
    comm_[l] -= alloc_r_[g] - keep;
    comm_[l + 1] -= alloc_l_[g] - keep;
    note(l, TraceEvent::CommRelease, alloc_r_[g] - keep);
    note(l + 1, TraceEvent::CommRelease, alloc_l_[g] - keep);
  }

  void gate_complete(std::size_t g, std::int64_t l) {
    if (!kept_[g]) return;
    comm_[l] -= 1;
    comm_[l + 1] -= 1;
    note(l, TraceEvent::CommRelease, 1);
    note(l + 1, TraceEvent::CommRelease, 1);
    const bool room = mem_[l] < mem_pool_ && mem_[l + 1] < mem_pool_;
    if (!room) {
      tot_->dropped_mem += 2;
      note(l, TraceEvent::DropMem, 1);
      note(l + 1, TraceEvent::DropMem, 1);
      return;
    }
    mem_[l] += 1;
    mem_[l + 1] += 1;
    note(l, TraceEvent::MemLoad, 1);
    note(l + 1, TraceEvent::MemLoad, 1);
    store(l);
  }

  void store(std::int64_t l) {
    stored_[l] = 1;
    heralded_[l] += 1;
    heralded_[l + 1] += 1;
    note(l, TraceEvent::Herald, 1);
    note(l + 1, TraceEvent::Herald, 1);
  }

  void end_step(std::int64_t s) {
    for (std::int64_t node = 0; node < nodes_; ++node) {
      tot_->peak_comm = std::max(tot_->peak_comm, comm_[node]);
      tot_->peak_mem = std::max(tot_->peak_mem, mem_[node]);
      tot_->peak_heralded = std::max(tot_->peak_heralded, heralded_[node]);
    }
    if (!tracing_) return;
    for (std::int64_t node = 0; node < nodes_; ++node) {
      for (int e = 0; e < static_cast<int>(TraceEvent::Swap); ++e) {
        auto& c = events_[static_cast<std::size_t>(node * kEventKinds + e)];
        if (c != 0) tot_->trace.push_back({block_, s, node, static_cast<TraceEvent>(e), c});
        c = 0;
      }
      tot_->trace.push_back({block_, s, node, TraceEvent::CommLoaded, comm_[node]});
      tot_->trace.push_back({block_, s, node, TraceEvent::MemLoaded, mem_[node]});
      tot_->trace.push_back({block_, s, node, TraceEvent::Heralded, heralded_[node]});
    }
  }

  const SimConfig& cfg_;
  Regime regime_;
  bool heralded_gate_;
  std::int64_t M_, m_, j_, k_, links_, nodes_;
  std::int64_t ready_ = 0;
  std::int64_t comm_pool_ = kUnlimited;
  std::int64_t mem_pool_ = kUnlimited;

  std::vector<std::int64_t> alloc_r_, alloc_l_, mem_r_, mem_l_;
  std::vector<std::uint8_t> kept_, success_, stored_;
  std::vector<std::int64_t> comm_, mem_, heralded_;
  std::vector<std::int64_t> events_;

  std::mt19937_64* rng_ = nullptr;
  ChunkTotals* tot_ = nullptr;
  bool tracing_ = false;
  std::int64_t block_ = 0;
};

ChunkTotals run_chunk(const SimConfig& cfg, std::int64_t chunk) {
  ChunkTotals tot;
  BlockRunner runner(cfg);
  auto rng = stream_for(cfg.seed, static_cast<std::uint64_t>(chunk));
  const std::int64_t first = chunk * kChunkBlocks;
  const std::int64_t last = std::min(cfg.num_blocks, first + kChunkBlocks);
  for (std::int64_t b = first; b < last; ++b) {
    ++tot.blocks;
    if (runner.run(rng, b, b < cfg.trace_blocks, tot)) ++tot.successes;
  }
  return tot;
}

} // namespace

std::string_view trace_event_name(TraceEvent e) {
  static constexpr std::array<std::string_view, kEventKinds> names{
      "init", "drop_comm", "comm_release", "mem_load", "drop_mem", "mem_release",
      "herald", "swap", "clear", "comm_loaded", "mem_loaded", "heralded"};
  return names[static_cast<std::size_t>(e)];
}

std::string format_trace_record(const TraceRecord& r) {
  std::ostringstream os;
  os << r.block << ',' << r.step << ',' << r.node << ',' << trace_event_name(r.event) << ',' << r.count;
  return os.str();
}

void SimConfig::validate() const {
  if (n_repeaters < 0) throw ParameterError("n", "must be >= 0");
  if (spatial_mux < 1) throw ParameterError("M", "must be >= 1");
  if (time_mux < 1) throw ParameterError("m", "must be >= 1");
  if (j_steps < 1) throw ParameterError("j_steps", "must be >= 1");
  if (k_steps < 0) throw ParameterError("k_steps", "must be >= 0");
  if (!(comm_lifetime_steps > static_cast<double>(j_steps)))
    throw ParameterError("tau_o", "communication-ion lifetime must exceed the gate time in steps");
  if (!(tau > 0.0)) throw ParameterError("tau", "must be > 0");
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("p_override", "must lie in [0, 1]");
  if (n_comm_ions < 0) throw ParameterError("n_comm_ions", "must be >= 0");
  if (n_mem_ions < 0) throw ParameterError("n_mem_ions", "must be >= 0");
  if (num_blocks < 1) throw ParameterError("blocks", "must be >= 1");
  if (trace_blocks < 0) throw ParameterError("trace_blocks", "must be >= 0");
}

Regime SimConfig::regime() const {
  return classify_regime_steps(static_cast<double>(k_steps), static_cast<double>(j_steps), comm_lifetime_steps);
}

SimConfig make_sim_config(const ChainLayout& layout, const HardwareProfile& hw, std::optional<double> p_override) {
  layout.validate();
  hw.validate();
  const DerivedTiming t = derive_timing(layout, hw);
  SimConfig cfg;
  cfg.n_repeaters = layout.n_repeaters;
  cfg.spatial_mux = layout.spatial_mux;
  cfg.time_mux = layout.time_mux;
  cfg.j_steps = std::max<std::int64_t>(1, steps_ceil(t.j_steps));
  cfg.k_steps = steps_ceil(t.k_steps);
  cfg.comm_lifetime_steps = hw.timing.tau_o / hw.timing.tau;
  cfg.tau = hw.timing.tau;
  cfg.p = p_override ? *p_override : link_success_prob(hw.optical, layout.elementary_length_km());
  return cfg;
}

std::int64_t block_wall_steps(const SimConfig& cfg) {
  return static_cast<std::int64_t>(denominator_steps(cfg.regime(), static_cast<double>(cfg.time_mux),
                                                     static_cast<double>(cfg.j_steps),
                                                     static_cast<double>(cfg.k_steps)));
}

IonRequirements integer_ion_requirements(const SimConfig& cfg) {
  return ion_requirements(cfg.spatial_mux, cfg.time_mux, static_cast<double>(cfg.j_steps),
                          static_cast<double>(cfg.k_steps), cfg.regime());
}

SimStats run_protocol_sim(const SimConfig& cfg) {
  cfg.validate();
  const std::int64_t chunks = (cfg.num_blocks + kChunkBlocks - 1) / kChunkBlocks;
  std::vector<ChunkTotals> parts(static_cast<std::size_t>(chunks));
  const unsigned workers =
      static_cast<unsigned>(std::min<std::int64_t>(resolve_thread_count(cfg.threads), chunks));

  auto work = [&](unsigned w) {
    for (std::int64_t c = w; c < chunks; c += workers) parts[static_cast<std::size_t>(c)] = run_chunk(cfg, c);
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  SimStats st;
  st.regime = cfg.regime();
  st.block_wall_steps = block_wall_steps(cfg);
  for (auto& part : parts) {
    st.blocks_run += part.blocks;
    st.successes += part.successes;
    st.peak_comm_loaded = std::max(st.peak_comm_loaded, part.peak_comm);
    st.peak_mem_loaded = std::max(st.peak_mem_loaded, part.peak_mem);
    st.peak_heralded = std::max(st.peak_heralded, part.peak_heralded);
    st.dropped_comm += part.dropped_comm;
    st.dropped_mem += part.dropped_mem;
    st.trace.insert(st.trace.end(), part.trace.begin(), part.trace.end());
  }
  st.empirical_block_success = static_cast<double>(st.successes) / static_cast<double>(st.blocks_run);
  st.empirical_rate = st.empirical_block_success / (static_cast<double>(st.block_wall_steps) * cfg.tau);
  return st;
}

ValidationVerdict validate_against_analytic(const SimConfig& cfg, const SimStats& stats, const RateReport& report,
                                            double sigma) {
  ValidationVerdict v;
  v.expected_block_success = report.block_success;
  v.empirical_block_success = stats.empirical_block_success;
  const double q = report.block_success;
  const double sd = std::sqrt(q * (1.0 - q) / static_cast<double>(stats.blocks_run));
  const double diff = stats.empirical_block_success - q;
  if (sd > 0.0)
    v.z_score = diff / sd;
  else
    v.z_score = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  v.success_ok = std::abs(v.z_score) <= sigma;
  if (!v.success_ok) {
    std::ostringstream os;
    os << "block success " << stats.empirical_block_success << " vs " << q << " (z = " << v.z_score << ")";
    v.failures.push_back(os.str());
  }

  const IonRequirements req = integer_ion_requirements(cfg);
  v.expected_n_o = req.n_o;
  v.expected_n_m = req.n_m;
  v.analytic_n_o = report.ions.n_o;
  v.n_o_quantization_delta = req.n_o - report.ions.n_o;
  v.quantization_delta_steps = static_cast<double>(stats.block_wall_steps) - report.denominator_steps;

  const bool exact_comm = !waits_for_herald(stats.regime) && cfg.n_repeaters >= 1 && cfg.time_mux >= cfg.j_steps &&
                          cfg.n_comm_ions == 0;
  v.comm_ok = exact_comm ? stats.peak_comm_loaded == req.n_o : stats.peak_comm_loaded <= req.n_o;
  v.mem_ok = stats.peak_mem_loaded <= req.n_m;
  if (!v.comm_ok) {
    std::ostringstream os;
    os << "peak communication ions " << stats.peak_comm_loaded << (exact_comm ? " != " : " > ") << req.n_o;
    v.failures.push_back(os.str());
  }
  if (!v.mem_ok) {
    std::ostringstream os;
    os << "peak memory ions " << stats.peak_mem_loaded << " > " << req.n_m;
    v.failures.push_back(os.str());
  }
  v.pass = v.success_ok && v.comm_ok && v.mem_ok;
  return v;
}

ValidationVerdict validate_against_analytic(const SimConfig& cfg, const RateReport& report, double sigma) {
  return validate_against_analytic(cfg, run_protocol_sim(cfg), report, sigma);
}

QEstimate sample_end_to_end_Q(std::int64_t n, const NoiseParams& noise, std::int64_t trials, std::uint64_t seed) {
  if (n < 0) throw ParameterError("n", "must be >= 0");
  if (trials < 1) throw ParameterError("trials", "must be >= 1");
  noise.validate();
  const double x = hop_survival_factor(noise);
  QEstimate est;
  est.out_of_domain = x < 0.0;
  const double flip = std::clamp((1.0 - x) / 2.0, 0.0, 1.0);
  auto rng = stream_for(seed, 0);
  std::int64_t errors = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    bool flag = false;
    for (std::int64_t hop = 0; hop < n; ++hop)
      if (uniform01(rng) < flip) flag = !flag;
    errors += flag ? 1 : 0;
  }
  est.q = static_cast<double>(errors) / static_cast<double>(trials);
  est.std_error = std::sqrt(est.q * (1.0 - est.q) / static_cast<double>(trials));
  return est;
}

} // namespace ionrep
