// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ionrep Authors
//
// ionrep-cli: rate evaluation, classification, optimization, sweeps,
// figure tables and Monte Carlo runs over the ionrep C API.

#include "CLI11.hpp"
#include "cli_commands.hpp"

#include <cstdint>
#include <iostream>

namespace {

using cli::Json;

struct Overrides {
  Json doc = Json::object();
  void set(const std::string& section, const std::string& key, Json v) { doc[section][key] = std::move(v); }
};

struct NumberFlag {
  const char* flag;
  const char* section;
  const char* key;
  const char* help;
};

constexpr NumberFlag kHardwareFlags[] = {
    {"--eta-c", "hardware", "eta_c", "Ion-photon collection efficiency"},
    {"--eta-d", "hardware", "eta_d", "Detector efficiency"},
    {"--alpha", "hardware", "alpha_db_per_km", "Fiber attenuation (dB/km)"},
    {"--n-ref", "hardware", "refractive_index", "Fiber refractive index"},
    {"--tau-us", "hardware", "tau_us", "Attempt period (us)"},
    {"--tau-g-us", "hardware", "tau_g_us", "Two-qubit gate time (us)"},
    {"--tau-o-us", "hardware", "tau_o_us", "Communication-ion lifetime (us)"},
    {"--tau-m-us", "hardware", "tau_m_us", "Memory-ion lifetime (us)"},
    {"--f0", "hardware", "f0", "Elementary-link fidelity"},
    {"--eps-g", "hardware", "eps_g", "Two-qubit gate error"},
    {"--memory-margin", "hardware", "memory_margin", "Required tau_m / block-duration ratio"},
};

void add_hardware(CLI::App* app, Overrides& ov) {
  for (const auto& f : kHardwareFlags) {
    const std::string section = f.section;
    const std::string key = f.key;
    app->add_option_function<double>(f.flag, [&ov, section, key](const double& v) { ov.set(section, key, v); },
                                     f.help);
  }
  app->add_option_function<double>(
      "--noise",
      [&ov](const double& v) {
        ov.set("hardware", "eps_g", v);
        ov.set("hardware", "f0", 1.0 - v);
      },
      "Set eps_g and 1 - f0 together");
}

void add_double(CLI::App* app, Overrides& ov, const std::string& flag, const std::string& section,
                const std::string& key, const std::string& help) {
  app->add_option_function<double>(flag, [&ov, section, key](const double& v) { ov.set(section, key, v); }, help);
}

void add_int(CLI::App* app, Overrides& ov, const std::string& flag, const std::string& section, const std::string& key,
             const std::string& help) {
  app->add_option_function<std::int64_t>(flag, [&ov, section, key](const std::int64_t& v) { ov.set(section, key, v); },
                                         help);
}

void add_layout(CLI::App* app, Overrides& ov, bool with_n_m) {
  add_double(app, ov, "-L,--length-km", "layout", "L_km", "Total chain length (km)");
  add_int(app, ov, "-M,--spatial", "layout", "M", "Spatial multiplexing M");
  if (with_n_m) {
    add_int(app, ov, "-n,--repeaters", "layout", "n", "Number of repeaters n");
    add_int(app, ov, "-m,--temporal", "layout", "m", "Time multiplexing m");
  }
}

void add_search(CLI::App* app, Overrides& ov) {
  add_int(app, ov, "--n-o-max", "constraints", "n_o_max", "Cap on communication ions per node");
  add_int(app, ov, "--n-m-max", "constraints", "n_m_max", "Cap on memory ions per node");
  add_double(app, ov, "--fixed-l0-km", "constraints", "fixed_l0_km", "Fix the inter-repeater spacing (km)");
  add_int(app, ov, "--fixed-n", "constraints", "fixed_n", "Fix the number of repeaters");
  add_double(app, ov, "--tau-min-us", "constraints", "tau_min_us", "Lower bound on the attempt period (us)");
  add_int(app, ov, "--n-max", "bounds", "n_max", "Largest n searched");
  add_int(app, ov, "--m-max", "bounds", "m_max", "Largest m searched");
}

void add_sweep(CLI::App* app, Overrides& ov) {
  app->add_option_function<std::vector<double>>(
         "--L-list", [&ov](const std::vector<double>& v) { ov.set("sweep", "L_km", v); },
         "Comma-separated distances (km)")
      ->delimiter(',');
  add_double(app, ov, "--L-start", "sweep", "start_km", "First distance (km)");
  add_double(app, ov, "--L-stop", "sweep", "stop_km", "Last distance (km)");
  add_double(app, ov, "--L-step", "sweep", "step_km", "Distance step (km)");
}

struct Common {
  std::string config_path;
  std::string format;
  unsigned threads = 0;
};

void add_common(CLI::App* app, Common& c, Overrides& ov) {
  app->add_option("-c,--config", c.config_path, "JSON config file");
  app->add_option("-f,--format", c.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app->add_option("-j,--threads", c.threads, "Worker threads (0: IONREP_THREADS or all cores)");
  add_hardware(app, ov);
}

const char* error_kind(int code) {
  switch (code) {
  case cli::kExitConfig: return "config";
  case cli::kExitInfeasible: return "infeasible";
  case cli::kExitValidation: return "validation";
  default: return "internal";
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity planner for multiplexed trapped-ion repeater chains"};
  app.set_version_flag("--version", std::string("ionrep ") + ionrep_version());
  app.require_subcommand(1);

  Common common;
  Overrides ov;
  cli::SimulateOptions sim_opts;
  cli::FigureOptions fig_opts;

  CLI::App* rate = app.add_subcommand("rate", "Evaluate one layout");
  add_common(rate, common, ov);
  add_layout(rate, ov, true);

  CLI::App* classify = app.add_subcommand("classify", "Show the timing regime and its decision path");
  add_common(classify, common, ov);
  add_layout(classify, ov, true);
  add_double(classify, ov, "--l0-km", "layout", "l0_km", "Inter-repeater spacing (km); default L/(n+1)");

  CLI::App* optimize = app.add_subcommand("optimize", "Maximize the rate over n and m");
  add_common(optimize, common, ov);
  add_layout(optimize, ov, false);
  add_search(optimize, ov);

  CLI::App* sweep = app.add_subcommand("sweep", "Optimize over a list of distances");
  add_common(sweep, common, ov);
  add_layout(sweep, ov, false);
  add_search(sweep, ov);
  add_sweep(sweep, ov);

  CLI::App* figure = app.add_subcommand("figure", "Write the CSV curves of a figure");
  add_common(figure, common, ov);
  add_search(figure, ov);
  add_sweep(figure, ov);
  figure->add_option("id", fig_opts.id, "Figure id")->required()->check(CLI::IsMember(cli::figure_ids()));
  figure->add_option("-o,--out-dir", fig_opts.out_dir, "Directory for the CSV files");

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo run of the block protocol");
  add_common(simulate, common, ov);
  add_layout(simulate, ov, true);
  add_int(simulate, ov, "--blocks", "simulation", "blocks", "Number of blocks");
  add_int(simulate, ov, "--seed", "simulation", "seed", "RNG seed");
  add_double(simulate, ov, "--p", "simulation", "p_override", "Link success probability override");
  add_int(simulate, ov, "--n-comm-ions", "simulation", "n_comm_ions", "Communication-ion pool (0: unlimited)");
  add_int(simulate, ov, "--n-mem-ions", "simulation", "n_mem_ions", "Memory-ion pool (0: unlimited)");
  add_int(simulate, ov, "--trace-blocks", "simulation", "trace_blocks", "Blocks recorded in the trace");
  add_double(simulate, ov, "--sigma", "simulation", "sigma", "Validation tolerance in binomial sigmas");
  simulate->add_flag("--validate", sim_opts.validate, "Compare against the analytic model");
  simulate->add_option("--trace", sim_opts.trace_path, "Write the event trace to FILE");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kExitConfig;
  }

  CLI::App* cmd = app.get_subcommands().front();
  const std::string name = cmd->get_name();
  cli::Context ctx;
  ctx.out = &std::cout;
  ctx.threads = common.threads;
  try {
    ctx.cfg = cli::default_config();
    if (!common.config_path.empty()) cli::merge_config(ctx.cfg, cli::load_config_file(common.config_path));
    cli::merge_config(ctx.cfg, ov.doc);
    if (!common.format.empty()) ctx.cfg["output"]["format"] = common.format;
    ctx.format = cli::parse_format(ctx.cfg["output"]["format"].get<std::string>());
  } catch (const cli::CommandError& e) {
    std::cerr << "ionrep-cli: config error: " << e.what() << '\n';
    return e.code();
  }

  try {
    int rc = cli::kExitOk;
    if (cmd == rate) rc = cli::run_rate(ctx);
    else if (cmd == classify) rc = cli::run_classify(ctx);
    else if (cmd == optimize) rc = cli::run_optimize(ctx);
    else if (cmd == sweep) rc = cli::run_sweep(ctx);
    else if (cmd == figure) rc = cli::run_figure(ctx, fig_opts);
    else if (cmd == simulate) rc = cli::run_simulate(ctx, sim_opts);
    if (rc == cli::kExitValidation) std::cerr << "ionrep-cli: validation failed\n";
    return rc;
  } catch (const cli::CommandError& e) {
    std::cerr << "ionrep-cli: " << error_kind(e.code()) << " error: " << e.what() << '\n';
    if (ctx.format == cli::Format::Json) {
      Json doc = cli::json_envelope(name);
      Json err{{"kind", error_kind(e.code())}, {"exit_code", e.code()}, {"message", e.what()}};
      for (const auto& [k, v] : e.detail().items()) err[k] = v;
      doc["error"] = std::move(err);
      std::cout << doc.dump(2) << '\n';
    }
    return e.code();
  } catch (const std::exception& e) {
    std::cerr << "ionrep-cli: internal error: " << e.what() << '\n';
    return cli::kExitInternal;
  }
}
