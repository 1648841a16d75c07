#include "quadsim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>

#include "quadsim/errors.hpp"

namespace quadsim {
namespace {

namespace fs = std::filesystem;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::ostream& out_stream(const CommandOptions& o) { return o.out ? *o.out : std::cout; }
std::ostream& err_stream(const CommandOptions& o) { return o.err ? *o.err : std::cerr; }

std::size_t channel_slot(Channel c) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (kTableChannels[i] == c) return i;
  }
  return 0;
}

std::size_t color_slot(NoiseColor c) { return static_cast<std::size_t>(c); }

template <class Fn>
void write_file(const fs::path& path, Fn&& body) {
  fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path.string());
  body(f);
  if (!f) throw Error("write failed for " + path.string());
}

void prepare_output(const ExperimentConfig& cfg) {
  const fs::path root(cfg.output_dir);
  fs::create_directories(root / "traces");
  fs::create_directories(root / "metrics");
  write_file(root / "resolved-config", [&](std::ostream& f) { f << cfg.resolved(); });
}

std::string run_stem(const RunResult& r) {
  return std::string(to_string(r.controller)) + "_" + noise_label(r.noise) + "_seed" +
         std::to_string(r.seed);
}

std::vector<MetricsRow> run_rows(const RunResult& r) {
  std::vector<MetricsRow> rows;
  for (std::size_t i = 0; i < 4; ++i) {
    MetricsRow row{std::string(to_string(r.controller)), noise_label(r.noise), {}};
    row.result.channel = kTableChannels[i];
    if (r.metrics) row.result = (*r.metrics)[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_metrics(const fs::path& path, const std::vector<MetricsRow>& rows) {
  write_file(path, [&](std::ostream& f) { write_metrics_csv(f, rows); });
}

void write_trace(const fs::path& path, const Trace& trace) {
  write_file(path, [&](std::ostream& f) { write_trace_csv(f, trace); });
}

void report_failures(const CompareResult& c, const CommandOptions& opts) {
  for (const auto& seed_runs : c.runs) {
    for (const auto& r : seed_runs) {
      if (!r.ok()) err_stream(opts) << "run error (" << r.label() << "): " << r.error << '\n';
    }
  }
}

void write_compare(const CompareResult& c, const ExperimentConfig& cfg,
                   const CommandOptions& opts) {
  const fs::path root(cfg.output_dir);
  const std::string noise = noise_label(c.noise);
  for (std::size_t i = 0; i < c.runs.size(); ++i) {
    write_metrics(root / "metrics" /
                      ("compare_" + noise + "_seed" + std::to_string(c.runs[i][0].seed) + ".csv"),
                  c.seed_table(i));
    if (opts.write_traces) {
      for (const auto& r : c.runs[i]) write_trace(root / "traces" / (run_stem(r) + ".csv"), r.trace);
    }
  }
  if (c.runs.size() > 1) {
    write_metrics(root / "metrics" / ("compare_" + noise + "_median.csv"), c.median_table());
  }
}

std::string format_fraction(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

std::string RunResult::label() const {
  return "controller=" + std::string(to_string(controller)) + " noise=" + noise_label(noise) +
         " seed=" + std::to_string(seed);
}

RunResult run_single(const ExperimentConfig& cfg, ControllerKind kind,
                     std::optional<NoiseColor> noise, std::uint64_t seed, bool keep_trace) {
  RunResult r;
  r.controller = kind;
  r.noise = noise;
  r.seed = seed;
  try {
    Trace trace = run(cfg.scenario(kind, noise, seed), cfg.quadrotor);
    r.metrics = analyze(trace, cfg.reference, cfg.band_for(noise));
    if (keep_trace) r.trace = std::move(trace);
  } catch (const SimulationError& e) {
    r.error = e.what();
    if (keep_trace) r.trace = e.partial_trace();
  }
  return r;
}

CompareResult compare(const ExperimentConfig& cfg, std::optional<NoiseColor> noise,
                      bool keep_traces) {
  CompareResult c;
  c.noise = noise;
  c.band_pct = cfg.band_for(noise);
  for (std::uint64_t seed : cfg.seeds) {
    std::array<RunResult, 3> runs;
    for (std::size_t k = 0; k < 3; ++k) {
      runs[k] = run_single(cfg, kCompareOrder[k], noise, seed, keep_traces);
    }
    c.runs.push_back(std::move(runs));
  }
  return c;
}

std::vector<MetricsRow> CompareResult::seed_table(std::size_t index) const {
  std::vector<MetricsRow> rows;
  for (Channel ch : kTableChannels) {
    for (const auto& r : runs.at(index)) rows.push_back(run_rows(r)[channel_slot(ch)]);
  }
  return rows;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  const double a = values[n / 2 - 1], b = values[n / 2];
  if (std::isinf(b)) return b;
  return 0.5 * (a + b);
}

std::vector<MetricsRow> CompareResult::median_table() const {
  std::vector<MetricsRow> rows;
  const std::string label = noise_label(noise);
  for (Channel ch : kTableChannels) {
    const std::size_t slot = channel_slot(ch);
    for (std::size_t k = 0; k < 3; ++k) {
      std::vector<double> rise, over, settle;
      bool any_step = false;
      for (const auto& seed_runs : runs) {
        const RunResult& r = seed_runs[k];
        if (!r.ok()) {
          rise.push_back(kInf);
          over.push_back(kInf);
          settle.push_back(kInf);
          continue;
        }
        const auto& m = (*r.metrics)[slot].metrics;
        if (!m) continue;
        any_step = true;
        rise.push_back(m->rise_time.value_or(kInf));
        over.push_back(m->overshoot_pct);
        settle.push_back(m->settling_time.value_or(kInf));
      }
      MetricsRow row{std::string(to_string(kCompareOrder[k])), label, {ch, std::nullopt}};
      if (any_step) {
        const auto finite = [](double v) -> std::optional<double> {
          return std::isfinite(v) ? std::optional<double>(v) : std::nullopt;
        };
        row.result.metrics =
            ResponseMetrics{finite(median(rise)), median(over), finite(median(settle)), band_pct};
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::size_t CompareResult::failures() const {
  std::size_t n = 0;
  for (const auto& seed_runs : runs) {
    for (const auto& r : seed_runs) n += r.ok() ? 0 : 1;
  }
  return n;
}

SweepSummary summarize(const std::vector<CompareResult>& per_color) {
  SweepSummary s;
  for (const auto& c : per_color) {
    if (!c.noise) throw DomainError("summarize: sweep results need a noise color");
    const std::size_t cs = color_slot(*c.noise);
    s.band_pct[cs] = c.band_pct;

    std::size_t all_settled = 0;
    for (const auto& seed_runs : c.runs) {
      const RunResult& bs = seed_runs[2];
      bool ok = bs.ok();
      if (ok) {
        for (const auto& cm : *bs.metrics) {
          if (cm.metrics && !cm.metrics->settling_time) ok = false;
        }
      }
      all_settled += ok ? 1 : 0;
    }
    s.backstepping_all_settled[cs] =
        c.runs.empty() ? 0.0 : static_cast<double>(all_settled) / c.runs.size();

    for (Channel ch : kTableChannels) {
      const std::size_t slot = channel_slot(ch);
      SummaryCell cell;
      cell.color = *c.noise;
      cell.channel = ch;
      for (std::size_t k = 0; k < 3; ++k) {
        std::vector<double> over;
        std::size_t settled = 0;
        for (const auto& seed_runs : c.runs) {
          const RunResult& r = seed_runs[k];
          if (!r.ok()) {
            over.push_back(kInf);
            continue;
          }
          const auto& m = (*r.metrics)[slot].metrics;
          if (!m) {
            over.push_back(0.0);
            ++settled;
            continue;
          }
          over.push_back(m->overshoot_pct);
          settled += m->settling_time ? 1 : 0;
        }
        cell.median_overshoot[k] = over.empty() ? kInf : median(over);
        cell.settled_fraction[k] =
            c.runs.empty() ? 0.0 : static_cast<double>(settled) / c.runs.size();
      }
      const auto& mo = cell.median_overshoot;
      cell.backstepping_least_overshoot = mo[2] < mo[0] && mo[2] < mo[1];
      s.cells.push_back(cell);
    }
  }
  return s;
}

double SweepSummary::ordering_fraction() const {
  if (cells.empty()) return 0.0;
  std::size_t wins = 0;
  for (const auto& c : cells) wins += c.backstepping_least_overshoot ? 1 : 0;
  return static_cast<double>(wins) / cells.size();
}

bool SweepSummary::settling_ok() const {
  std::vector<NoiseColor> present;
  for (const auto& c : cells) {
    if (std::find(present.begin(), present.end(), c.color) == present.end()) {
      present.push_back(c.color);
    }
  }
  if (present.empty()) return false;
  return std::all_of(present.begin(), present.end(), [&](NoiseColor c) {
    return backstepping_all_settled[color_slot(c)] >= 0.8;
  });
}

void write_summary_csv(std::ostream& out, const SweepSummary& s) {
  out << kSummaryHeader << '\n';
  for (const auto& c : s.cells) {
    out << to_string(c.color) << ',' << to_string(c.channel) << ','
        << format_metric(s.band_pct[color_slot(c.color)]);
    for (double v : c.median_overshoot) out << ',' << format_metric(v);
    out << ',' << (c.backstepping_least_overshoot ? 1 : 0);
    for (double v : c.settled_fraction) out << ',' << format_fraction(v);
    out << ',' << format_fraction(s.backstepping_all_settled[color_slot(c.color)]) << '\n';
  }
}

int cmd_simulate(const ExperimentConfig& cfg, ControllerKind kind,
                 std::optional<NoiseColor> noise, const CommandOptions& opts) {
  cfg.validate();
  prepare_output(cfg);
  const fs::path root(cfg.output_dir);
  const RunResult r = run_single(cfg, kind, noise, cfg.seeds.front());
  const std::string stem = run_stem(r);
  write_trace(root / "traces" / (stem + ".csv"), r.trace);
  const auto rows = run_rows(r);
  write_metrics(root / "metrics" / (stem + ".csv"), rows);
  write_metrics(root / "summary.csv", rows);
  if (!r.ok()) {
    err_stream(opts) << "run error (" << r.label() << "): " << r.error << '\n';
    return kExitRun;
  }
  return kExitOk;
}

int cmd_compare(const ExperimentConfig& cfg, std::optional<NoiseColor> noise,
                const CommandOptions& opts) {
  cfg.validate();
  prepare_output(cfg);
  const CompareResult c = compare(cfg, noise, opts.write_traces);
  write_compare(c, cfg, opts);
  write_metrics(fs::path(cfg.output_dir) / "summary.csv",
                c.runs.size() > 1 ? c.median_table() : c.seed_table(0));
  report_failures(c, opts);
  return c.failures() ? kExitRun : kExitOk;
}

int cmd_sweep(const ExperimentConfig& cfg, const CommandOptions& opts) {
  cfg.validate();
  prepare_output(cfg);
  std::vector<CompareResult> results;
  std::size_t failures = 0;
  for (NoiseColor color : kAllColors) {
    results.push_back(compare(cfg, color, opts.write_traces));
    write_compare(results.back(), cfg, opts);
    report_failures(results.back(), opts);
    failures += results.back().failures();
  }
  const SweepSummary s = summarize(results);
  write_file(fs::path(cfg.output_dir) / "summary.csv",
             [&](std::ostream& f) { write_summary_csv(f, s); });

  auto& out = out_stream(opts);
  const std::size_t wins = static_cast<std::size_t>(std::lround(s.ordering_fraction() * s.cells.size()));
  out << "overshoot ordering: backstepping least in " << wins << "/" << s.cells.size()
      << " cells (" << (s.ordering_ok() ? "pass" : "fail") << ", need >= 80%)\n";
  for (NoiseColor color : kAllColors) {
    out << "backstepping settles all channels, " << to_string(color) << ": "
        << format_fraction(s.backstepping_all_settled[color_slot(color)]) << " of seeds\n";
  }
  out << "settling: " << (s.settling_ok() ? "pass" : "fail") << '\n';
  if (!s.passed()) return kExitAcceptance;
  return failures ? kExitRun : kExitOk;
}

int cmd_noise(const ExperimentConfig& cfg, NoiseColor color, std::size_t n_samples,
              const CommandOptions& opts) {
  cfg.validate();
  if (n_samples < (std::size_t{1} << 14)) {
    throw ConfigError("noise: sample count must be at least 16384");
  }
  prepare_output(cfg);
  NoiseSpec spec = *cfg.noise_spec(color);
  spec.seed = cfg.seeds.front();
  NoiseStream stream(spec);
  std::vector<double> samples(n_samples);
  for (double& v : samples) v = stream.next_sample();

  const fs::path root(cfg.output_dir);
  const std::string name = std::string(to_string(color));
  write_file(root / "traces" / ("noise_" + name + ".csv"), [&](std::ostream& f) {
    f << "index,t,value\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
      f << i << ',' << format_double(static_cast<double>(i) * spec.sample_time) << ','
        << format_double(samples[i]) << '\n';
    }
  });
  const Periodogram psd = welch_psd(samples, spec.sample_time);
  write_file(root / "metrics" / ("psd_" + name + ".csv"), [&](std::ostream& f) {
    f << "frequency_hz,psd\n";
    for (std::size_t i = 0; i < psd.frequency.size(); ++i) {
      f << format_double(psd.frequency[i]) << ',' << format_double(psd.power[i]) << '\n';
    }
  });

  const double slope = psd_slope(samples, spec.sample_time, kSlopeBandLo, kSlopeBandHi);
  const double target = nominal_slope_db(color);
  const bool pass = std::abs(slope - target) <= kSlopeTolerance;
  write_file(root / "summary.csv", [&](std::ostream& f) {
    f << "noise,n_samples,slope_db_per_decade,target_db_per_decade,tolerance,pass\n"
      << name << ',' << n_samples << ',' << format_double(slope) << ','
      << format_double(target) << ',' << format_double(kSlopeTolerance) << ','
      << (pass ? 1 : 0) << '\n';
  });
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s: slope %.3f dB/decade, target %+.0f +- %.0f: %s\n",
                name.c_str(), slope, target, kSlopeTolerance, pass ? "pass" : "fail");
  out_stream(opts) << buf;
  return pass ? kExitOk : kExitAcceptance;
}

}  // namespace quadsim
