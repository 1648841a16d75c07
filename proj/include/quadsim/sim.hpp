#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "quadsim/control.hpp"
#include "quadsim/errors.hpp"
#include "quadsim/model.hpp"
#include "quadsim/noise.hpp"

namespace quadsim {

/// Where the per-channel noise enters the loop.
///  - input:  added to the demanded control as an altitude/angular
///            acceleration disturbance (U1 += m*n_z, U2 += Ix*n_phi, ...),
///            before rotor saturation.
///  - sensor: added to the measured z, phi, theta, psi seen by the controller.
enum class NoiseInjection { input, sensor };

std::string_view to_string(NoiseInjection injection);
NoiseInjection parse_noise_injection(std::string_view name);

/// Noise channels, in trace column order.
enum class Channel { altitude = 0, roll = 1, pitch = 2, yaw = 3 };

struct Scenario {
  ControllerGains controller = BacksteppingGains{};
  ReferenceSignal reference;
  /// Per-channel noise. The spec's seed field is ignored: channel c draws
  /// from mix_seed(seed, c).
  std::optional<NoiseSpec> noise;
  NoiseInjection injection = NoiseInjection::input;
  double duration = 20.0;
  double dt = 0.01;
  RigidBodyState initial;
  std::uint64_t seed = 1;

  void validate() const;
  std::size_t step_count() const;
};

struct TraceRow {
  double t = 0;
  RigidBodyState state;
  ControlVector control;  // realized, after rotor saturation
  RotorSpeeds speeds;
  std::array<double, 4> noise{};
  bool clamped = false;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct Trace {
  std::vector<TraceRow> rows;

  double duration() const { return rows.empty() ? 0.0 : rows.back().t - rows.front().t; }
  std::vector<double> times() const;
  std::vector<double> channel(Channel c) const;

  friend bool operator==(const Trace&, const Trace&) = default;
};

/// A run that stopped early. The rows recorded up to the failure are kept.
class SimulationError : public Error {
 public:
  enum class Kind { divergence, tilt };

  SimulationError(Kind kind, const std::string& what, Trace partial)
      : Error(what), kind_(kind), partial_(std::move(partial)) {}

  Kind kind() const { return kind_; }
  const Trace& partial_trace() const { return partial_; }

 private:
  Kind kind_;
  Trace partial_;
};

inline constexpr double kDivergenceLimit = 1e6;

/// Classical fourth-order Runge-Kutta step with u and w_r held constant.
RigidBodyState rk4_step(const RigidBodyState& s, const ControlVector& u, double w_r,
                        const QuadrotorParams& p, double dt);

/// Closed-loop run. Deterministic in (sc, p).
Trace run(const Scenario& sc, const QuadrotorParams& p);

inline constexpr std::string_view kTraceHeader =
    "t,X,Y,Z,Xd,Yd,Zd,phi,theta,psi,phid,thetad,psid,U1,U2,U3,U4,w1,w2,w3,w4,n_z,n_phi,n_theta,"
    "n_psi,clamped";

void write_trace_csv(std::ostream& out, const Trace& trace);

/// Shortest decimal form that round-trips (17 significant digits).
std::string format_double(double v);

}  // namespace quadsim
