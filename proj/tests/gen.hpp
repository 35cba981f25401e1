// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ionrep Authors
//
// Tiny seeded generators for property tests.

#pragma once

#include <cstdint>
#include <random>
#include <cmath>

namespace gen {

class Source {
public:
  explicit Source(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi);
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  bool coin() { return integer(0, 1) == 1; }

private:
  std::mt19937_64 rng_;
};

inline double Source::log_uniform(double lo, double hi) {
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

// Default number of cases per property.
inline constexpr int kCases = 300;

} // namespace gen
