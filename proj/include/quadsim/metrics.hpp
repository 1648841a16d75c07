#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quadsim/control.hpp"
#include "quadsim/sim.hpp"

namespace quadsim {

/// One response column paired with its step. Time grid must be uniform and
/// the reference must differ from the initial value.
struct StepChannel {
  std::span<const double> time;
  std::span<const double> values;
  double initial = 0;
  double reference = 1;

  void validate() const;
};

struct ResponseMetrics {
  std::optional<double> rise_time;      // s, 10% -> 90% of the step
  double overshoot_pct = 0;             // %
  std::optional<double> settling_time;  // s
  double band_pct = 2;                  // %
};

/// 10%-90% rise time with linear interpolation of both crossings; absent
/// if the response never reaches 90% of the step.
std::optional<double> rise_time(const StepChannel& ch);

/// Peak excursion beyond the step magnitude, as a percentage of it.
double overshoot(const StepChannel& ch);

/// Earliest time after which the response stays within band_pct % of the
/// step magnitude around the reference until the end of the trace.
std::optional<double> settling_time(const StepChannel& ch, double band_pct);

ResponseMetrics response_metrics(const StepChannel& ch, double band_pct);

std::string_view to_string(Channel c);

/// Channels in table order: roll, pitch, yaw, altitude.
inline constexpr Channel kTableChannels[] = {Channel::roll, Channel::pitch, Channel::yaw,
                                             Channel::altitude};

struct ChannelMetrics {
  Channel channel = Channel::roll;
  /// Empty when the channel has no step (reference equals initial value).
  std::optional<ResponseMetrics> metrics;
};

/// Metrics for roll, pitch, yaw and altitude of a complete trace.
std::array<ChannelMetrics, 4> analyze(const Trace& trace, const ReferenceSignal& reference,
                                      double band_pct);

inline constexpr std::string_view kMetricsHeader =
    "controller,channel,noise,rise_time_s,overshoot_pct,settling_time_s,band_pct";

struct MetricsRow {
  std::string controller;
  std::string noise;
  ChannelMetrics result;
};

void write_metrics_csv(std::ostream& out, std::span<const MetricsRow> rows);

/// Metrics value formatting; absent or non-finite values render as "-".
std::string format_metric(std::optional<double> v);

}  // namespace quadsim
