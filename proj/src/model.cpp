#include "quadsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "quadsim/errors.hpp"

namespace quadsim {

QuadrotorParams QuadrotorParams::literal_table() {
  QuadrotorParams p;
  p.thrust_coeff = 3.13;
  return p;
}

void QuadrotorParams::validate() const {
  const auto require_positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("quadrotor.") + name + " must be finite and > 0 (got " +
                        std::to_string(v) + ")");
    }
  };
  require_positive(mass, "mass");
  require_positive(gravity, "gravity");
  require_positive(arm_length, "arm_length");
  require_positive(thrust_coeff, "thrust_coeff");
  require_positive(drag_coeff, "drag_coeff");
  require_positive(Ix, "Ix");
  require_positive(Iy, "Iy");
  require_positive(Iz, "Iz");
  require_positive(rotor_inertia, "rotor_inertia");
  require_positive(max_rotor_speed, "max_rotor_speed");
  require_positive(max_torque, "max_torque");
  if (Ix != Iy) {
    throw ConfigError("quadrotor.Ix must equal quadrotor.Iy (cross configuration)");
  }
}

StateVector RigidBodyState::to_vector() const {
  return {X, Y, Z, Xd, Yd, Zd, phi, theta, psi, phid, thetad, psid};
}

RigidBodyState RigidBodyState::from_vector(const StateVector& v) {
  return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11]};
}

bool RigidBodyState::is_finite() const {
  const auto v = to_vector();
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

Eigen::Matrix3d rotation_matrix(double phi, double theta, double psi) {
  const double cf = std::cos(phi), sf = std::sin(phi);
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(psi), sp = std::sin(psi);
  Eigen::Matrix3d r;
  r << cp * ct, sp * ct, -st,
       cp * st * sf - sp * cf, sp * st * sf + cp * cf, ct * sf,
       cp * st * cf + sp * sf, sp * st * cf - cp * sf, ct * cf;
  return r;
}

Eigen::Matrix3d euler_rate_matrix(double phi, double theta) {
  if (!(std::abs(theta) < std::numbers::pi / 2)) {
    throw DomainError("euler_rate_matrix: |theta| must be < pi/2 (got " + std::to_string(theta) +
                      ")");
  }
  const double cf = std::cos(phi), sf = std::sin(phi);
  const double tt = std::tan(theta), sec = 1.0 / std::cos(theta);
  Eigen::Matrix3d t;
  t << 1.0, tt * sf, tt * cf,
       0.0, cf, -sf,
       0.0, sec * sf, sec * cf;
  return t;
}

Eigen::Vector3d euler_rates(const BodyRates& rates, double phi, double theta) {
  return euler_rate_matrix(phi, theta) * Eigen::Vector3d(rates.P, rates.Q, rates.R);
}

ControlVector mix(const RotorSpeeds& w, const QuadrotorParams& p) {
  const double s1 = w.w1 * w.w1, s2 = w.w2 * w.w2, s3 = w.w3 * w.w3, s4 = w.w4 * w.w4;
  const double lb = p.arm_length * p.thrust_coeff;
  return {p.thrust_coeff * (s1 + s2 + s3 + s4), lb * (s4 - s2), lb * (s1 - s3),
          p.drag_coeff * (-s1 + s2 - s3 + s4)};
}

std::array<double, 4> unmix_squared(const ControlVector& u, const QuadrotorParams& p) {
  const double thrust = u.U1 / (4.0 * p.thrust_coeff);
  const double arm = 1.0 / (2.0 * p.thrust_coeff * p.arm_length);
  const double yaw = u.U4 / (4.0 * p.drag_coeff);
  return {thrust + arm * u.U3 - yaw, thrust - arm * u.U2 + yaw, thrust - arm * u.U3 - yaw,
          thrust + arm * u.U2 + yaw};
}

UnmixResult unmix(const ControlVector& u, const QuadrotorParams& p) {
  const auto sq = unmix_squared(u, p);
  const double limit = p.max_rotor_speed * p.max_rotor_speed;
  UnmixResult out;
  std::array<double, 4> w{};
  for (std::size_t i = 0; i < 4; ++i) {
    double v = sq[i];
    // NaN demands are treated as infeasible and floored.
    if (!(v >= 0.0)) {
      v = 0.0;
      out.clamped = true;
    } else if (v > limit) {
      v = limit;
      out.clamped = true;
    }
    w[i] = std::sqrt(v);
  }
  out.speeds = {w[0], w[1], w[2], w[3]};
  return out;
}

double relative_rotor_speed(const RotorSpeeds& w) { return -w.w1 + w.w2 - w.w3 + w.w4; }

Inertias inertia_from_geometry(const InertiaGeometry& geom) {
  const double core = 0.4 * geom.sphere_mass * geom.radius * geom.radius;
  const double arm2 = geom.arm_length * geom.arm_length;
  const double lateral = core + 2.0 * arm2 * geom.rotor_mass;
  return {lateral, lateral, core + 4.0 * arm2 * geom.rotor_mass};
}

RigidBodyState state_derivative(const RigidBodyState& s, const ControlVector& u, double w_r,
                                const QuadrotorParams& p) {
  const double cf = std::cos(s.phi), sf = std::sin(s.phi);
  const double ct = std::cos(s.theta), st = std::sin(s.theta);
  const double cp = std::cos(s.psi), sp = std::sin(s.psi);
  const double accel = u.U1 / p.mass;

  RigidBodyState d;
  d.X = s.Xd;
  d.Y = s.Yd;
  d.Z = s.Zd;
  d.Xd = accel * (cf * st * cp + sf * sp);
  d.Yd = accel * (st * sp * cf - sf * cp);
  // Written as a single difference so U1 == m*g at level attitude is an exact zero.
  d.Zd = (u.U1 * cf * ct - p.mass * p.gravity) / p.mass;
  d.phi = s.phid;
  d.theta = s.thetad;
  d.psi = s.psid;
  d.phid = u.U2 / p.Ix + ((p.Iy - p.Iz) / p.Ix) * s.psid * s.thetad +
           (p.rotor_inertia / p.Ix) * s.thetad * w_r;
  d.thetad = u.U3 / p.Iy + ((p.Iz - p.Ix) / p.Iy) * s.phid * s.psid -
             (p.rotor_inertia / p.Iy) * s.phid * w_r;
  d.psid = u.U4 / p.Iz + ((p.Ix - p.Iy) / p.Iz) * s.thetad * s.phid;
  return d;
}

}  // namespace quadsim
