// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ionrep Authors

#pragma once

#include "cli_output.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace cli {

struct Context {
  Json cfg;
  Format format = Format::Text;
  unsigned threads = 0; // 0: IONREP_THREADS or machine parallelism
  std::ostream* out = nullptr;
};

int run_rate(const Context& ctx);
int run_optimize(const Context& ctx);
int run_sweep(const Context& ctx);
int run_classify(const Context& ctx);

struct SimulateOptions {
  bool validate = false;
  std::string trace_path;
};
int run_simulate(const Context& ctx, const SimulateOptions& opts);

struct FigureOptions {
  std::string id;
  std::string out_dir = ".";
};
int run_figure(const Context& ctx, const FigureOptions& opts);

/// Figure ids accepted by run_figure.
const std::vector<std::string>& figure_ids();

/// Shared record fields for a rate report.
void append_report(Record& rec, const ionrep_rate_report& r);

} // namespace cli
