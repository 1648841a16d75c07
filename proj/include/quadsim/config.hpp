#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quadsim/control.hpp"
#include "quadsim/model.hpp"
#include "quadsim/noise.hpp"
#include "quadsim/sim.hpp"

namespace quadsim {

/// Everything an invocation of the batch tool depends on.
///
/// Text form is one `key = value` per line; `#` starts a comment. Keys:
///
///   quadrotor.{mass,gravity,arm_length,thrust_coeff,drag_coeff,Ix,Iy,Iz,
///              rotor_inertia,max_rotor_speed,max_torque}
///   gains.pid.{altitude,roll,pitch,yaw}.{kp,ki,kd}
///   gains.lyapunov.{kz,k1,k2,k3}
///   gains.backstepping.a1 .. a8
///   reference.{z,phi,theta,psi}
///   initial.{X,Y,Z,Xd,Yd,Zd,phi,theta,psi,phid,thetad,psid}
///   noise.color        white|pink|brown|blue|purple|none
///   noise.power        white-noise spectral power
///   noise.stddev       stddev of the colored streams (default sqrt(power/sample_time))
///   noise.sample_time
///   noise.injection    input|sensor
///   sim.dt, sim.duration
///   metrics.band_pct               band for noise-free runs and white/pink/brown
///   metrics.band_pct.<color>       per-color override (blue and purple default to 5)
///   run.seeds          "1..20", "3", or "1,4,9"
///   run.controller     pid|lyapunov|backstepping
///   output.dir
struct ExperimentConfig {
  QuadrotorParams quadrotor;
  PidGains pid;
  LyapunovGains lyapunov;
  BacksteppingGains backstepping;
  ReferenceSignal reference{1.0, 0.2, 0.2, 0.2};
  RigidBodyState initial;

  std::optional<NoiseColor> noise_color = NoiseColor::white;
  double noise_power = 0.01;
  std::optional<double> noise_stddev;
  double noise_sample_time = 0.1;
  NoiseInjection injection = NoiseInjection::input;

  double dt = 0.01;
  double duration = 20.0;

  double band_pct = 2.0;
  std::array<std::optional<double>, 5> color_band{std::nullopt, std::nullopt, std::nullopt, 5.0,
                                                  5.0};

  std::vector<std::uint64_t> seeds = default_seeds();
  ControllerKind controller = ControllerKind::backstepping;
  std::string output_dir = "out";

  static std::vector<std::uint64_t> default_seeds();

  /// Checks every parameter that a run would check, before any run starts.
  void validate() const;

  ControllerGains gains(ControllerKind kind) const;
  double colored_stddev() const;
  std::optional<NoiseSpec> noise_spec(std::optional<NoiseColor> color) const;
  double band_for(std::optional<NoiseColor> color) const;
  void set_band_all(double pct);

  Scenario scenario(ControllerKind kind, std::optional<NoiseColor> color,
                    std::uint64_t seed) const;

  /// Every effective key with its value, in documentation order.
  std::string resolved() const;
};

/// Parses the text form over the defaults. `source` names the file in
/// error messages.
ExperimentConfig parse_config(std::string_view text, std::string_view source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

std::vector<std::uint64_t> parse_seed_list(std::string_view text);
std::optional<NoiseColor> parse_noise_choice(std::string_view text);
std::string noise_label(std::optional<NoiseColor> color);

}  // namespace quadsim
