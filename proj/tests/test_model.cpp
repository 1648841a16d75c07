#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "quadsim/errors.hpp"
#include "quadsim/model.hpp"

using namespace quadsim;
using doctest::Approx;

namespace {
double inf_norm(const Eigen::Matrix3d& m) { return m.cwiseAbs().maxCoeff(); }
}  // namespace

TEST_CASE("rotation matrix at zero is identity") {
  CHECK(inf_norm(rotation_matrix(0, 0, 0) - Eigen::Matrix3d::Identity()) == 0.0);
}

TEST_CASE("rotation matrix for a quarter yaw") {
  Eigen::Matrix3d expect;
  expect << 0, 1, 0, -1, 0, 0, 0, 0, 1;
  CHECK(inf_norm(rotation_matrix(0, 0, std::numbers::pi / 2) - expect) < 1e-15);
}

TEST_CASE("rotation matrix is orthonormal with unit determinant") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Matrix3d r = rotation_matrix(angle(rng), angle(rng), angle(rng));
    CHECK(inf_norm(r * r.transpose() - Eigen::Matrix3d::Identity()) < 1e-12);
    CHECK(std::abs(r.determinant() - 1.0) < 1e-12);
  }
}

TEST_CASE("euler rate matrix") {
  CHECK(inf_norm(euler_rate_matrix(0, 0) - Eigen::Matrix3d::Identity()) == 0.0);
  const double q = std::numbers::pi / 4;
  CHECK(euler_rate_matrix(q, q)(0, 1) == Approx(std::sqrt(2.0) / 2).epsilon(1e-12));
  CHECK_THROWS_AS(euler_rate_matrix(0, std::numbers::pi / 2), DomainError);
  CHECK_THROWS_AS(euler_rate_matrix(0, -2.0), DomainError);

  const Eigen::Vector3d rates = euler_rates({0.1, -0.2, 0.3}, 0, 0);
  CHECK(rates(0) == 0.1);
  CHECK(rates(1) == -0.2);
  CHECK(rates(2) == 0.3);
}

TEST_CASE("mix with equal speeds gives pure thrust") {
  const QuadrotorParams p;
  const ControlVector u = mix({300, 300, 300, 300}, p);
  CHECK(u.U1 == Approx(4 * p.thrust_coeff * 300 * 300).epsilon(1e-14));
  CHECK(u.U2 == 0.0);
  CHECK(u.U3 == 0.0);
  CHECK(u.U4 == 0.0);
}

TEST_CASE("hover speeds balance gravity") {
  const QuadrotorParams p;
  const ControlVector u = mix({225.68, 225.68, 225.68, 225.68}, p);
  CHECK(u.U1 == Approx(p.mass * p.gravity).epsilon(1e-4));
  CHECK(u.U1 == Approx(6.3765).epsilon(1e-4));
}

TEST_CASE("unmix examples") {
  const QuadrotorParams p;
  const UnmixResult one = unmix({4 * p.thrust_coeff, 0, 0, 0}, p);
  CHECK(one.speeds.w1 == Approx(1.0).epsilon(1e-12));
  CHECK(one.speeds.w2 == Approx(1.0).epsilon(1e-12));
  CHECK(one.speeds.w3 == Approx(1.0).epsilon(1e-12));
  CHECK(one.speeds.w4 == Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(one.clamped);

  const UnmixResult zero = unmix({0, 0, 0, 0}, p);
  CHECK(zero.speeds == RotorSpeeds{});
  CHECK_FALSE(zero.clamped);

  const UnmixResult neg = unmix({-10, 0, 0, 0}, p);
  CHECK(neg.speeds == RotorSpeeds{});
  CHECK(neg.clamped);

  const UnmixResult high = unmix({1e6, 0, 0, 0}, p);
  CHECK(high.speeds.w1 == p.max_rotor_speed);
  CHECK(high.clamped);
}

TEST_CASE("unmix inverts mix for in-range speeds") {
  const QuadrotorParams p;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> speed(1.0, p.max_rotor_speed);
  for (int i = 0; i < 1000; ++i) {
    const RotorSpeeds w{speed(rng), speed(rng), speed(rng), speed(rng)};
    const auto sq = unmix_squared(mix(w, p), p);
    const double in[] = {w.w1, w.w2, w.w3, w.w4};
    for (int k = 0; k < 4; ++k) {
      CHECK(std::abs(sq[k] - in[k] * in[k]) / (in[k] * in[k]) < 1e-9);
    }
    const UnmixResult back = unmix(mix(w, p), p);
    CHECK_FALSE(back.clamped);
    CHECK(std::abs(back.speeds.w1 - w.w1) / w.w1 < 1e-9);
  }
}

TEST_CASE("relative rotor speed") {
  CHECK(relative_rotor_speed({5, 5, 5, 5}) == 0.0);
  CHECK(relative_rotor_speed({1, 2, 3, 4}) == 2.0);
  CHECK(relative_rotor_speed({225.68, 225.68, 225.68, 225.68}) == 0.0);
}

TEST_CASE("inertia from geometry") {
  const Inertias zero = inertia_from_geometry({});
  CHECK(zero.Ix == 0.0);
  CHECK(zero.Iy == 0.0);
  CHECK(zero.Iz == 0.0);

  const Inertias in = inertia_from_geometry({0.4, 0.0625, 0.1, 0.23});
  CHECK(in.Ix == Approx(0.0082125).epsilon(1e-12));
  CHECK(in.Iy == in.Ix);
  CHECK(in.Iz == Approx(0.014825).epsilon(1e-12));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 2.0);
  for (int i = 0; i < 200; ++i) {
    const InertiaGeometry g{u(rng), u(rng), u(rng), u(rng)};
    const Inertias r = inertia_from_geometry(g);
    CHECK(r.Ix == r.Iy);
    CHECK(r.Iz - r.Ix == Approx(2 * g.arm_length * g.arm_length * g.rotor_mass).epsilon(1e-12));
  }
}

TEST_CASE("hover is a fixed point of the dynamics") {
  const QuadrotorParams p;
  const RigidBodyState d = state_derivative({}, {p.mass * p.gravity, 0, 0, 0}, 0.0, p);
  for (double v : d.to_vector()) CHECK(std::abs(v) < 1e-15);
}

TEST_CASE("free fall") {
  const QuadrotorParams p;
  const RigidBodyState d = state_derivative({}, {}, 0.0, p);
  CHECK(d.Zd == -9.81);
  const auto v = d.to_vector();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i != 5) CHECK(v[i] == 0.0);
  }
}

TEST_CASE("gyroscopic coupling on roll") {
  const QuadrotorParams p;
  RigidBodyState s;
  s.thetad = 1;
  s.psid = 1;
  const RigidBodyState d = state_derivative(s, {}, 0.0, p);
  CHECK(d.phid == Approx((7.5e-3 - 1.3e-2) / 7.5e-3).epsilon(1e-12));
  CHECK(d.phid == Approx(-0.7333).epsilon(1e-4));

  // Rotor gyroscope: +J_r/Ix * thetadot * w_r on roll, -J_r/Iy * phidot * w_r on pitch.
  RigidBodyState t;
  t.thetad = 2;
  t.phid = 3;
  const RigidBodyState g = state_derivative(t, {}, 10.0, p);
  CHECK(g.phid == Approx(p.rotor_inertia / p.Ix * 2 * 10).epsilon(1e-12));
  CHECK(g.thetad == Approx(-p.rotor_inertia / p.Iy * 3 * 10).epsilon(1e-12));
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(QuadrotorParams{}.validate());
  QuadrotorParams p;
  p.mass = -1;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.Iy = p.Ix * 2;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  CHECK(QuadrotorParams::literal_table().thrust_coeff == 3.13);
}

TEST_CASE("state vector round trip") {
  RigidBodyState s;
  s.X = 1;
  s.psid = -4;
  CHECK(RigidBodyState::from_vector(s.to_vector()) == s);
  s.theta = NAN;
  CHECK_FALSE(s.is_finite());
}
