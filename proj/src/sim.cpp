#include "quadsim/sim.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace quadsim {
namespace {

StateVector axpy(const StateVector& y, double h, const StateVector& k) {
  StateVector out;
  for (std::size_t i = 0; i < kStateSize; ++i) out[i] = y[i] + h * k[i];
  return out;
}

bool diverged(const RigidBodyState& s) {
  for (double v : s.to_vector()) {
    if (!std::isfinite(v) || std::abs(v) > kDivergenceLimit) return true;
  }
  return false;
}

std::size_t whole_ratio(double num, double den, const char* what) {
  const double ratio = num / den;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, rounded)) {
    throw ConfigError(std::string(what) + " must be a whole multiple of sim.dt");
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace

std::string_view to_string(NoiseInjection injection) {
  return injection == NoiseInjection::input ? "input" : "sensor";
}

NoiseInjection parse_noise_injection(std::string_view name) {
  if (name == "input") return NoiseInjection::input;
  if (name == "sensor") return NoiseInjection::sensor;
  throw ConfigError("unknown noise injection '" + std::string(name) +
                    "' (expected input or sensor)");
}

void Scenario::validate() const {
  if (!(duration > 0.0) || !std::isfinite(duration)) throw ConfigError("sim.duration must be > 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("sim.dt must be > 0");
  whole_ratio(duration, dt, "sim.duration");
  reference.validate();
  if (!initial.is_finite()) throw ConfigError("initial state must be finite");
  std::visit([](const auto& g) { g.validate(); }, controller);
  if (noise) {
    noise->validate();
    if (dt > noise->sample_time * (1.0 + 1e-12)) {
      throw ConfigError("sim.dt must not exceed noise.sample_time");
    }
    whole_ratio(noise->sample_time, dt, "noise.sample_time");
  }
}

std::size_t Scenario::step_count() const { return whole_ratio(duration, dt, "sim.duration"); }

std::vector<double> Trace::times() const {
  std::vector<double> t;
  t.reserve(rows.size());
  for (const auto& r : rows) t.push_back(r.t);
  return t;
}

std::vector<double> Trace::channel(Channel c) const {
  std::vector<double> v;
  v.reserve(rows.size());
  for (const auto& r : rows) {
    switch (c) {
      case Channel::altitude: v.push_back(r.state.Z); break;
      case Channel::roll: v.push_back(r.state.phi); break;
      case Channel::pitch: v.push_back(r.state.theta); break;
      case Channel::yaw: v.push_back(r.state.psi); break;
    }
  }
  return v;
}

RigidBodyState rk4_step(const RigidBodyState& s, const ControlVector& u, double w_r,
                        const QuadrotorParams& p, double dt) {
  const auto f = [&](const StateVector& y) {
    return state_derivative(RigidBodyState::from_vector(y), u, w_r, p).to_vector();
  };
  const StateVector y = s.to_vector();
  const StateVector k1 = f(y);
  const StateVector k2 = f(axpy(y, 0.5 * dt, k1));
  const StateVector k3 = f(axpy(y, 0.5 * dt, k2));
  const StateVector k4 = f(axpy(y, dt, k3));
  StateVector out;
  for (std::size_t i = 0; i < kStateSize; ++i) {
    out[i] = y[i] + dt * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0;
  }
  return RigidBodyState::from_vector(out);
}

Trace run(const Scenario& sc, const QuadrotorParams& p) {
  sc.validate();
  p.validate();

  const std::size_t steps = sc.step_count();
  std::size_t per_sample = 1;
  std::array<std::vector<double>, 4> noise;
  if (sc.noise) {
    per_sample = whole_ratio(sc.noise->sample_time, sc.dt, "noise.sample_time");
    const std::size_t count = steps / per_sample + 1;
    for (std::size_t c = 0; c < 4; ++c) {
      NoiseSpec spec = *sc.noise;
      spec.seed = mix_seed(sc.seed, c);
      noise[c] = HeldNoise::generate(spec, count).samples();
    }
  }

  Controller controller(sc.controller);
  Trace trace;
  trace.rows.reserve(steps + 1);
  RigidBodyState state = sc.initial;
  double w_r_prev = 0.0;

  for (std::size_t k = 0;; ++k) {
    TraceRow row;
    row.t = static_cast<double>(k) * sc.dt;
    row.state = state;
    if (sc.noise) {
      for (std::size_t c = 0; c < 4; ++c) row.noise[c] = noise[c][k / per_sample];
    }

    Measurement meas = Measurement::from_state(state);
    if (sc.injection == NoiseInjection::sensor) {
      meas.z += row.noise[0];
      meas.phi += row.noise[1];
      meas.theta += row.noise[2];
      meas.psi += row.noise[3];
    }

    ControlVector demand;
    try {
      demand = controller.update(meas, sc.reference, w_r_prev, p, sc.dt);
    } catch (const TiltError& e) {
      throw SimulationError(SimulationError::Kind::tilt,
                            "t = " + format_double(row.t) + ": " + e.what(), std::move(trace));
    }
    if (sc.injection == NoiseInjection::input) {
      demand.U1 += p.mass * row.noise[0];
      demand.U2 += p.Ix * row.noise[1];
      demand.U3 += p.Iy * row.noise[2];
      demand.U4 += p.Iz * row.noise[3];
    }

    const UnmixResult actuation = unmix(demand, p);
    row.speeds = actuation.speeds;
    row.clamped = actuation.clamped;
    row.control = mix(actuation.speeds, p);
    const double w_r = relative_rotor_speed(actuation.speeds);
    trace.rows.push_back(row);

    if (k == steps) break;
    state = rk4_step(state, row.control, w_r, p, sc.dt);
    if (diverged(state)) {
      throw SimulationError(SimulationError::Kind::divergence,
                            "state diverged after t = " + format_double(row.t), std::move(trace));
    }
    w_r_prev = w_r;
  }
  return trace;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace.rows) {
    out << format_double(r.t);
    for (double v : r.state.to_vector()) out << ',' << format_double(v);
    for (double v : {r.control.U1, r.control.U2, r.control.U3, r.control.U4}) {
      out << ',' << format_double(v);
    }
    for (double v : {r.speeds.w1, r.speeds.w2, r.speeds.w3, r.speeds.w4}) {
      out << ',' << format_double(v);
    }
    for (double v : r.noise) out << ',' << format_double(v);
    out << ',' << (r.clamped ? 1 : 0) << '\n';
  }
}

}  // namespace quadsim
