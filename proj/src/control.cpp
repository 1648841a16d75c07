#include "quadsim/control.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "quadsim/errors.hpp"

namespace quadsim {
namespace {

double tilt_factor(const Measurement& m, std::string_view who) {
  const double c = std::cos(m.phi) * std::cos(m.theta);
  if (!(c > kTiltEpsilon)) {
    throw TiltError(std::string(who) + ": cos(phi)*cos(theta) = " + std::to_string(c) +
                    " is at or below the tilt limit");
  }
  return c;
}

void require_non_negative(double v, const std::string& name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw ConfigError(name + " must be finite and >= 0 (got " + std::to_string(v) + ")");
  }
}

void require_positive(double v, const std::string& name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(name + " must be finite and > 0 (got " + std::to_string(v) + ")");
  }
}

// One PID channel on error e; integral is accumulated before use.
double pid_channel(double e, PidChannelState& st, const PidChannelGains& g, double dt) {
  st.integral += e * dt;
  const double derivative = (e - st.previous_error) / dt;
  st.previous_error = e;
  return g.kp * e + g.ki * st.integral + g.kd * derivative;
}

}  // namespace

void ReferenceSignal::validate() const {
  for (double v : {z, phi, theta, psi}) {
    if (!std::isfinite(v)) throw ConfigError("reference values must be finite");
  }
  if (!(std::abs(theta) < std::numbers::pi / 2)) {
    throw ConfigError("reference.theta must satisfy |theta| < pi/2");
  }
}

Measurement Measurement::from_state(const RigidBodyState& s) {
  return {s.Z, s.phi, s.theta, s.psi, s.Zd, s.phid, s.thetad, s.psid};
}

void PidGains::validate() const {
  const auto check = [](const PidChannelGains& c, const std::string& ch) {
    require_non_negative(c.kp, "gains.pid." + ch + ".kp");
    require_non_negative(c.ki, "gains.pid." + ch + ".ki");
    require_non_negative(c.kd, "gains.pid." + ch + ".kd");
  };
  check(altitude, "altitude");
  check(roll, "roll");
  check(pitch, "pitch");
  check(yaw, "yaw");
}

void LyapunovGains::validate() const {
  require_positive(kz, "gains.lyapunov.kz");
  require_positive(k1, "gains.lyapunov.k1");
  require_positive(k2, "gains.lyapunov.k2");
  require_positive(k3, "gains.lyapunov.k3");
}

void BacksteppingGains::validate() const {
  const double a[] = {a1, a2, a3, a4, a5, a6, a7, a8};
  for (int i = 0; i < 8; ++i) {
    require_positive(a[i], "gains.backstepping.a" + std::to_string(i + 1));
  }
}

std::pair<ControlVector, PidState> pid_control(const Measurement& m, const ReferenceSignal& r,
                                               const PidState& st, const PidGains& g,
                                               const QuadrotorParams& p, double dt) {
  if (!(dt > 0.0)) throw DomainError("pid_control: dt must be > 0");
  const double c = tilt_factor(m, "pid_control");
  PidState next = st;
  ControlVector u;
  const double lift = pid_channel(r.z - m.z, next.altitude, g.altitude, dt);
  u.U1 = p.mass * (p.gravity + lift) / c;
  u.U2 = pid_channel(r.phi - m.phi, next.roll, g.roll, dt);
  u.U3 = pid_channel(r.theta - m.theta, next.pitch, g.pitch, dt);
  u.U4 = pid_channel(r.psi - m.psi, next.yaw, g.yaw, dt);
  return {u, next};
}

// Attitude torques are scaled by the axis inertia so that, with the plant's
// torque/inertia dynamics, dV/dt = -(k1/Ix) phidot^2 - (k2/Iy) thetadot^2
// - (k3/Iz) psidot^2 exactly.
ControlVector lyapunov_control(const Measurement& m, const ReferenceSignal& r,
                               const LyapunovGains& g, const QuadrotorParams& p) {
  const double c = tilt_factor(m, "lyapunov_control");
  ControlVector u;
  u.U1 = (p.mass / c) * (p.gravity + (r.z - m.z)) - g.kz * m.zdot;
  u.U2 = -p.Ix * (m.phi - r.phi) - g.k1 * m.phidot;
  u.U3 = -p.Iy * (m.theta - r.theta) - g.k2 * m.thetadot;
  u.U4 = -p.Iz * (m.psi - r.psi) - g.k3 * m.psidot;
  return u;
}

double lyapunov_value_attitude(const Measurement& m, const ReferenceSignal& r) {
  const double ef = m.phi - r.phi, et = m.theta - r.theta, ep = m.psi - r.psi;
  return 0.5 * (m.phidot * m.phidot + ef * ef + m.thetadot * m.thetadot + et * et +
                m.psidot * m.psidot + ep * ep);
}

double lyapunov_value_altitude(const Measurement& m, const ReferenceSignal& r) {
  const double ez = m.z - r.z;
  return 0.5 * (ez * ez + m.zdot * m.zdot);
}

BacksteppingErrors backstepping_errors(const Measurement& m, const ReferenceSignal& r,
                                       const BacksteppingGains& g) {
  BacksteppingErrors e;
  e.z1 = r.phi - m.phi;
  e.z2 = m.phidot - g.a1 * e.z1;
  e.z3 = r.theta - m.theta;
  e.z4 = m.thetadot - g.a3 * e.z3;
  e.z5 = r.psi - m.psi;
  e.z6 = m.psidot - g.a5 * e.z5;
  e.z7 = m.z - r.z;
  e.z8 = m.zdot - g.a7 * e.z7;
  return e;
}

ControlVector backstepping_control(const BacksteppingErrors& e, const Measurement& m, double w_r,
                                   const BacksteppingGains& g, const QuadrotorParams& p) {
  const double c = tilt_factor(m, "backstepping_control");
  // Model coefficients, kept apart from the a1..a8 gains.
  const double c1 = (p.Iy - p.Iz) / p.Ix;
  const double c2 = p.rotor_inertia / p.Ix;
  const double c3 = (p.Iz - p.Ix) / p.Iy;
  const double c4 = p.rotor_inertia / p.Iy;
  const double c5 = (p.Ix - p.Iy) / p.Iz;
  const double l = p.arm_length;

  ControlVector u;
  u.U2 = (p.Ix / l) * (e.z1 - c1 * m.thetadot * m.psidot - c2 * m.thetadot * w_r -
                       g.a1 * (e.z2 + g.a1 * e.z1) - g.a2 * e.z2);
  u.U3 = (p.Iy / l) * (e.z3 - c3 * m.phidot * m.psidot - c4 * m.phidot * w_r -
                       g.a3 * (e.z4 + g.a3 * e.z3) - g.a4 * e.z4);
  u.U4 = p.Iz * (e.z5 - c5 * m.phidot * m.thetadot - g.a5 * (e.z6 + g.a5 * e.z5) - g.a6 * e.z6);

  // Altitude uses the same error orientation as the attitude loops
  // (reference minus output); with z7 = z - z_d taken literally the loop
  // has positive feedback.
  const double alt = -e.z7;
  const double alt_rate = e.z8 + 2.0 * g.a7 * e.z7;  // zdot - a7 * alt
  u.U1 = (p.mass / c) * (alt + p.gravity - g.a7 * (alt_rate + g.a7 * alt) - g.a8 * alt_rate);
  return u;
}

std::string_view to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::pid: return "pid";
    case ControllerKind::lyapunov: return "lyapunov";
    case ControllerKind::backstepping: return "backstepping";
  }
  return "unknown";
}

ControllerKind parse_controller_kind(std::string_view name) {
  if (name == "pid") return ControllerKind::pid;
  if (name == "lyapunov") return ControllerKind::lyapunov;
  if (name == "backstepping") return ControllerKind::backstepping;
  throw ConfigError("unknown controller '" + std::string(name) +
                    "' (expected pid, lyapunov or backstepping)");
}

Controller::Controller(ControllerGains gains) : gains_(std::move(gains)) {}

ControllerKind Controller::kind() const { return static_cast<ControllerKind>(gains_.index()); }

ControlVector Controller::update(const Measurement& m, const ReferenceSignal& r, double w_r,
                                 const QuadrotorParams& p, double dt) {
  if (const auto* g = std::get_if<PidGains>(&gains_)) {
    auto [u, next] = pid_control(m, r, pid_state_, *g, p, dt);
    pid_state_ = next;
    return u;
  }
  if (const auto* g = std::get_if<LyapunovGains>(&gains_)) {
    return lyapunov_control(m, r, *g, p);
  }
  const auto& g = std::get<BacksteppingGains>(gains_);
  return backstepping_control(backstepping_errors(m, r, g), m, w_r, g, p);
}

}  // namespace quadsim
