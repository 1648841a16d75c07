#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "quadsim/config.hpp"
#include "quadsim/metrics.hpp"

namespace quadsim {

inline constexpr ControllerKind kCompareOrder[] = {ControllerKind::pid, ControllerKind::lyapunov,
                                                   ControllerKind::backstepping};

/// One closed-loop run with its metrics. A failed run keeps its partial
/// trace, has no metrics and carries the error text.
struct RunResult {
  ControllerKind controller = ControllerKind::backstepping;
  std::optional<NoiseColor> noise;
  std::uint64_t seed = 0;
  Trace trace;
  std::optional<std::array<ChannelMetrics, 4>> metrics;
  std::string error;

  bool ok() const { return error.empty(); }
  /// "controller=pid noise=white seed=3"
  std::string label() const;
};

RunResult run_single(const ExperimentConfig& cfg, ControllerKind kind,
                     std::optional<NoiseColor> noise, std::uint64_t seed, bool keep_trace = true);

/// The three controllers on the same seeds and therefore the same noise.
struct CompareResult {
  std::optional<NoiseColor> noise;
  double band_pct = 2;
  std::vector<std::array<RunResult, 3>> runs;  // one entry per seed, kCompareOrder

  /// Rows for one seed: roll, pitch, yaw, altitude, each as pid, lyapunov,
  /// backstepping.
  std::vector<MetricsRow> seed_table(std::size_t index) const;
  /// Median over seeds of each metric. Failed runs count as infinite
  /// overshoot; a missing rise or settling time counts as infinite, so a
  /// median that lands there is reported absent.
  std::vector<MetricsRow> median_table() const;
  std::size_t failures() const;
};

CompareResult compare(const ExperimentConfig& cfg, std::optional<NoiseColor> noise,
                      bool keep_traces = false);

/// One (color, channel) cell of the sweep summary.
struct SummaryCell {
  NoiseColor color = NoiseColor::white;
  Channel channel = Channel::roll;
  std::array<double, 3> median_overshoot{};  // kCompareOrder; infinity if unavailable
  std::array<double, 3> settled_fraction{};  // fraction of seeds with a settling time
  bool backstepping_least_overshoot = false;
};

struct SweepSummary {
  std::vector<SummaryCell> cells;                  // 5 colors x 4 channels
  std::array<double, 5> backstepping_all_settled{};  // per color, fraction of seeds
  std::array<double, 5> band_pct{};

  double ordering_fraction() const;
  bool ordering_ok() const { return ordering_fraction() >= 0.8; }
  bool settling_ok() const;
  bool passed() const { return ordering_ok() && settling_ok(); }
};

SweepSummary summarize(const std::vector<CompareResult>& per_color);

inline constexpr std::string_view kSummaryHeader =
    "noise,channel,band_pct,median_overshoot_pid,median_overshoot_lyapunov,"
    "median_overshoot_backstepping,backstepping_least_overshoot,settled_frac_pid,"
    "settled_frac_lyapunov,settled_frac_backstepping,backstepping_all_channels_settled_frac";

void write_summary_csv(std::ostream& out, const SweepSummary& summary);

/// Median of the values; +infinity stays infinite. Empty input gives NaN.
double median(std::vector<double> values);

struct CommandOptions {
  bool write_traces = false;
  std::ostream* out = nullptr;  // reports; stdout when null
  std::ostream* err = nullptr;  // diagnostics; stderr when null
};

/// Exit codes shared by the commands.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitRun = 2, kExitAcceptance = 3 };

/// Output goes to cfg.output_dir: traces/, metrics/, summary.csv and
/// resolved-config.
int cmd_simulate(const ExperimentConfig& cfg, ControllerKind kind,
                 std::optional<NoiseColor> noise, const CommandOptions& opts);
int cmd_compare(const ExperimentConfig& cfg, std::optional<NoiseColor> noise,
                const CommandOptions& opts);
/// Returns kExitAcceptance when the ordering or settling targets are missed,
/// otherwise kExitRun if any run failed.
int cmd_sweep(const ExperimentConfig& cfg, const CommandOptions& opts);
/// Dumps samples and the Welch PSD and checks the slope against the color's
/// nominal value within +-3 dB/decade over [0.1, 4] Hz.
int cmd_noise(const ExperimentConfig& cfg, NoiseColor color, std::size_t n_samples,
              const CommandOptions& opts);

inline constexpr double kSlopeBandLo = 0.1;
inline constexpr double kSlopeBandHi = 4.0;
inline constexpr double kSlopeTolerance = 3.0;

}  // namespace quadsim
