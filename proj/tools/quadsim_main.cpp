// Batch front-end: simulate, compare, sweep, noise.
#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "quadsim/config.hpp"
#include "quadsim/errors.hpp"
#include "quadsim/experiment.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string seeds;
  std::string out;
  std::optional<double> band;
  std::string noise;
  std::string controller;
  bool traces = false;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config, "config file (key = value lines)");
  sub->add_option("--seed", f.seed, "run a single seed");
  sub->add_option("--seeds", f.seeds, "seed range n..m or list a,b,c");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--band", f.band, "settling band in percent, for every noise color");
  sub->add_option("--noise", f.noise, "white|pink|brown|blue|purple|none");
  sub->add_option("--controller", f.controller, "pid|lyapunov|backstepping");
}

quadsim::ExperimentConfig resolve(const CommonFlags& f) {
  using namespace quadsim;
  ExperimentConfig cfg = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
  if (!f.seeds.empty()) cfg.seeds = parse_seed_list(f.seeds);
  if (f.seed) cfg.seeds = {*f.seed};
  if (!f.out.empty()) cfg.output_dir = f.out;
  if (f.band) cfg.set_band_all(*f.band);
  if (!f.noise.empty()) cfg.noise_color = parse_noise_choice(f.noise);
  if (!f.controller.empty()) cfg.controller = parse_controller_kind(f.controller);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace quadsim;
  CLI::App app{"quadrotor controller simulation under colored noise"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::size_t samples = 1 << 16;

  auto* simulate = app.add_subcommand("simulate", "one closed-loop run");
  auto* compare = app.add_subcommand("compare", "all three controllers on one noise condition");
  auto* sweep = app.add_subcommand("sweep", "compare under each of the five noise colors");
  auto* noise = app.add_subcommand("noise", "dump a noise stream and its PSD slope");
  for (auto* sub : {simulate, compare, sweep, noise}) add_common(sub, flags);
  for (auto* sub : {compare, sweep}) {
    sub->add_flag("--traces", flags.traces, "also write a trace CSV per run");
  }
  noise->add_option("--samples", samples, "number of samples (>= 16384)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const ExperimentConfig cfg = resolve(flags);
    CommandOptions opts;
    opts.write_traces = flags.traces;
    if (*simulate) return cmd_simulate(cfg, cfg.controller, cfg.noise_color, opts);
    if (*compare) return cmd_compare(cfg, cfg.noise_color, opts);
    if (*sweep) return cmd_sweep(cfg, opts);
    if (!cfg.noise_color) throw ConfigError("noise: --noise must name a color");
    return cmd_noise(cfg, *cfg.noise_color, samples, opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const BandError& e) {
    std::cerr << "band error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRun;
  }
}
