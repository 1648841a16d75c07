#pragma once

#include <array>

#include <Eigen/Core>

namespace quadsim {

/// Physical constants of the airframe. Defaults are the OS4 platform values,
/// with the thrust coefficient in N*s^2 scaled so hover sits well below the
/// rotor speed limit.
struct QuadrotorParams {
  double mass = 0.65;               // kg
  double gravity = 9.81;            // m/s^2
  double arm_length = 0.23;         // m
  double thrust_coeff = 3.13e-5;    // N*s^2
  double drag_coeff = 7.5e-7;       // N*m*s^2
  double Ix = 7.5e-3;               // kg*m^2
  double Iy = 7.5e-3;               // kg*m^2
  double Iz = 1.3e-2;               // kg*m^2
  double rotor_inertia = 6.5e-5;    // kg*m^2
  double max_rotor_speed = 1000.0;  // rad/s
  double max_torque = 0.15;         // N*m

  /// Same set with the thrust coefficient printed literally as 3.13.
  static QuadrotorParams literal_table();

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;
};

inline constexpr std::size_t kStateSize = 12;
using StateVector = std::array<double, kStateSize>;

/// Position, velocity, Euler angles and Euler angle rates. The attitude
/// rates are stored directly (small-angle identification of body and
/// Euler rates).
struct RigidBodyState {
  double X = 0, Y = 0, Z = 0;
  double Xd = 0, Yd = 0, Zd = 0;
  double phi = 0, theta = 0, psi = 0;
  double phid = 0, thetad = 0, psid = 0;

  StateVector to_vector() const;
  static RigidBodyState from_vector(const StateVector& v);
  bool is_finite() const;

  friend bool operator==(const RigidBodyState&, const RigidBodyState&) = default;
};

/// Collective thrust [N] and roll/pitch/yaw torques [N*m].
struct ControlVector {
  double U1 = 0, U2 = 0, U3 = 0, U4 = 0;

  friend bool operator==(const ControlVector&, const ControlVector&) = default;
};

struct RotorSpeeds {
  double w1 = 0, w2 = 0, w3 = 0, w4 = 0;

  friend bool operator==(const RotorSpeeds&, const RotorSpeeds&) = default;
};

struct UnmixResult {
  RotorSpeeds speeds;
  bool clamped = false;
};

struct BodyRates {
  double P = 0, Q = 0, R = 0;
};

struct InertiaGeometry {
  double sphere_mass = 0;  // kg
  double rotor_mass = 0;   // kg, single rotor
  double radius = 0;       // m
  double arm_length = 0;   // m
};

struct Inertias {
  double Ix = 0, Iy = 0, Iz = 0;
};

/// Earth-to-body rotation R(phi) * R(theta) * R(psi).
Eigen::Matrix3d rotation_matrix(double phi, double theta, double psi);

/// Maps body rates (P, Q, R) to Euler angle rates. Throws DomainError when
/// |theta| >= pi/2.
Eigen::Matrix3d euler_rate_matrix(double phi, double theta);

/// Euler angle rates for the given body rates.
Eigen::Vector3d euler_rates(const BodyRates& rates, double phi, double theta);

ControlVector mix(const RotorSpeeds& w, const QuadrotorParams& p);

/// Inverse mixer. Squared speeds are clamped to [0, w_max^2]; the result
/// reports whether any clamping happened.
UnmixResult unmix(const ControlVector& u, const QuadrotorParams& p);

/// Squared rotor speeds demanded by u, before any clamping.
std::array<double, 4> unmix_squared(const ControlVector& u, const QuadrotorParams& p);

double relative_rotor_speed(const RotorSpeeds& w);

Inertias inertia_from_geometry(const InertiaGeometry& geom);

/// Time derivative of the full state under actuation u and relative rotor
/// speed w_r.
RigidBodyState state_derivative(const RigidBodyState& s, const ControlVector& u, double w_r,
                                const QuadrotorParams& p);

}  // namespace quadsim
