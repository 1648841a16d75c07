#pragma once

#include <string_view>
#include <utility>
#include <variant>

#include "quadsim/model.hpp"

namespace quadsim {

/// Step references for altitude and attitude; their time derivatives are zero.
struct ReferenceSignal {
  double z = 0, phi = 0, theta = 0, psi = 0;

  void validate() const;
};

/// Controller-side view of the vehicle: outputs (possibly noisy) plus rates.
struct Measurement {
  double z = 0, phi = 0, theta = 0, psi = 0;
  double zdot = 0, phidot = 0, thetadot = 0, psidot = 0;

  static Measurement from_state(const RigidBodyState& s);
};

/// cos(phi)*cos(theta) must stay above this for the thrust division.
inline constexpr double kTiltEpsilon = 1e-6;

struct PidChannelGains {
  double kp = 0, ki = 0, kd = 0;
};

/// Defaults reproduce the published PID coefficient table.
struct PidGains {
  PidChannelGains altitude{0.82, 1.0, 1.65};
  PidChannelGains roll{0.12, 0.05, 0.06};
  PidChannelGains pitch{0.14, 0.07, 0.08};
  PidChannelGains yaw{0.13, 0.05, 0.1};

  void validate() const;
};

struct PidChannelState {
  double integral = 0;
  double previous_error = 0;

  friend bool operator==(const PidChannelState&, const PidChannelState&) = default;
};

struct PidState {
  PidChannelState altitude, roll, pitch, yaw;

  friend bool operator==(const PidState&, const PidState&) = default;
};

struct LyapunovGains {
  double kz = 2.15, k1 = 0.167, k2 = 0.168, k3 = 0.104;

  void validate() const;
};

/// (a1,a2) roll, (a3,a4) pitch, (a5,a6) yaw, (a7,a8) altitude.
struct BacksteppingGains {
  double a1 = 8.6, a2 = 6.9, a3 = 8.1, a4 = 3.9, a5 = 8.4, a6 = 4.1, a7 = 1.4, a8 = 5.9;

  void validate() const;
};

/// Tracking errors and virtual-control errors of the backstepping design.
/// z7 = z - z_d and z8 = zdot - zdot_d - a7*z7.
struct BacksteppingErrors {
  double z1 = 0, z2 = 0, z3 = 0, z4 = 0, z5 = 0, z6 = 0, z7 = 0, z8 = 0;
};

std::pair<ControlVector, PidState> pid_control(const Measurement& m, const ReferenceSignal& r,
                                               const PidState& st, const PidGains& g,
                                               const QuadrotorParams& p, double dt);

ControlVector lyapunov_control(const Measurement& m, const ReferenceSignal& r,
                               const LyapunovGains& g, const QuadrotorParams& p);

/// 1/2 * sum of squared attitude errors and attitude rates.
double lyapunov_value_attitude(const Measurement& m, const ReferenceSignal& r);

/// 1/2 * ((z - z_d)^2 + zdot^2).
double lyapunov_value_altitude(const Measurement& m, const ReferenceSignal& r);

BacksteppingErrors backstepping_errors(const Measurement& m, const ReferenceSignal& r,
                                       const BacksteppingGains& g);

ControlVector backstepping_control(const BacksteppingErrors& e, const Measurement& m, double w_r,
                                   const BacksteppingGains& g, const QuadrotorParams& p);

enum class ControllerKind { pid, lyapunov, backstepping };

std::string_view to_string(ControllerKind kind);
ControllerKind parse_controller_kind(std::string_view name);

using ControllerGains = std::variant<PidGains, LyapunovGains, BacksteppingGains>;

/// Common front for the three control laws. Owns the PID memory, so one
/// instance belongs to one simulation.
class Controller {
 public:
  explicit Controller(ControllerGains gains);

  ControllerKind kind() const;
  const ControllerGains& gains() const { return gains_; }

  ControlVector update(const Measurement& m, const ReferenceSignal& r, double w_r,
                       const QuadrotorParams& p, double dt);

  void reset() { pid_state_ = {}; }
  const PidState& pid_state() const { return pid_state_; }

 private:
  ControllerGains gains_;
  PidState pid_state_;
};

}  // namespace quadsim
