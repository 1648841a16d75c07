#include "quadsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "quadsim/errors.hpp"

namespace quadsim {
namespace {

// Time at which the normalized response first reaches `level`.
std::optional<double> first_crossing(const StepChannel& ch, double level) {
  const double step = ch.reference - ch.initial;
  double prev = 0.0;
  for (std::size_t i = 0; i < ch.values.size(); ++i) {
    const double y = (ch.values[i] - ch.initial) / step;
    if (y >= level) {
      if (i == 0) return ch.time[0];
      const double frac = (level - prev) / (y - prev);
      return ch.time[i - 1] + frac * (ch.time[i] - ch.time[i - 1]);
    }
    prev = y;
  }
  return std::nullopt;
}

}  // namespace

void StepChannel::validate() const {
  if (time.empty() || time.size() != values.size()) {
    throw DomainError("StepChannel: time and values must be nonempty and of equal length");
  }
  if (reference == initial) throw DomainError("StepChannel: reference equals initial value");
}

std::optional<double> rise_time(const StepChannel& ch) {
  ch.validate();
  const auto t90 = first_crossing(ch, 0.9);
  if (!t90) return std::nullopt;
  return *t90 - *first_crossing(ch, 0.1);
}

double overshoot(const StepChannel& ch) {
  ch.validate();
  const double step = ch.reference - ch.initial;
  const double sign = step > 0 ? 1.0 : -1.0;
  double peak = -INFINITY;
  for (double v : ch.values) peak = std::max(peak, sign * (v - ch.initial));
  return std::max(0.0, 100.0 * peak / std::abs(step) - 100.0);
}

std::optional<double> settling_time(const StepChannel& ch, double band_pct) {
  ch.validate();
  if (!(band_pct > 0.0)) throw DomainError("settling_time: band_pct must be > 0");
  const double band = band_pct / 100.0 * std::abs(ch.reference - ch.initial);
  const auto outside = [&](double v) { return std::abs(v - ch.reference) > band; };

  std::size_t n = ch.values.size();
  std::size_t last = n;  // last index outside the band
  for (std::size_t i = n; i-- > 0;) {
    if (outside(ch.values[i])) {
      last = i;
      break;
    }
  }
  if (last == n) return ch.time[0];
  if (last == n - 1) return std::nullopt;

  const double v0 = ch.values[last], v1 = ch.values[last + 1];
  const double edge = ch.reference + (v0 > ch.reference ? band : -band);
  const double frac = (edge - v0) / (v1 - v0);
  return ch.time[last] + frac * (ch.time[last + 1] - ch.time[last]);
}

ResponseMetrics response_metrics(const StepChannel& ch, double band_pct) {
  return {rise_time(ch), overshoot(ch), settling_time(ch, band_pct), band_pct};
}

std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::altitude: return "altitude";
    case Channel::roll: return "roll";
    case Channel::pitch: return "pitch";
    case Channel::yaw: return "yaw";
  }
  return "unknown";
}

std::array<ChannelMetrics, 4> analyze(const Trace& trace, const ReferenceSignal& reference,
                                      double band_pct) {
  if (trace.rows.empty()) throw DomainError("analyze: empty trace");
  const std::vector<double> time = trace.times();
  std::array<ChannelMetrics, 4> out;
  for (std::size_t i = 0; i < 4; ++i) {
    const Channel c = kTableChannels[i];
    out[i].channel = c;
    const std::vector<double> values = trace.channel(c);
    double ref = 0.0;
    switch (c) {
      case Channel::altitude: ref = reference.z; break;
      case Channel::roll: ref = reference.phi; break;
      case Channel::pitch: ref = reference.theta; break;
      case Channel::yaw: ref = reference.psi; break;
    }
    if (ref == values.front()) continue;
    out[i].metrics = response_metrics(StepChannel{time, values, values.front(), ref}, band_pct);
  }
  return out;
}

std::string format_metric(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", *v);
  return buf;
}

void write_metrics_csv(std::ostream& out, std::span<const MetricsRow> rows) {
  out << kMetricsHeader << '\n';
  for (const auto& r : rows) {
    out << r.controller << ',' << to_string(r.result.channel) << ',' << r.noise << ',';
    if (const auto& m = r.result.metrics) {
      out << format_metric(m->rise_time) << ',' << format_metric(m->overshoot_pct) << ','
          << format_metric(m->settling_time) << ',' << format_metric(m->band_pct) << '\n';
    } else {
      out << "-,-,-,-\n";
    }
  }
}

}  // namespace quadsim
