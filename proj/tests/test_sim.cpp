#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "quadsim/sim.hpp"

using namespace quadsim;
using doctest::Approx;

namespace {

Scenario noise_free(ControllerGains gains, ReferenceSignal ref) {
  Scenario sc;
  sc.controller = std::move(gains);
  sc.reference = ref;
  return sc;
}

}  // namespace

TEST_CASE("rk4 keeps hover fixed") {
  const QuadrotorParams p;
  const RigidBodyState s = rk4_step({}, {p.mass * p.gravity, 0, 0, 0}, 0.0, p, 0.01);
  for (double v : s.to_vector()) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("rk4 free fall is exact for constant acceleration") {
  const QuadrotorParams p;
  const RigidBodyState s = rk4_step({}, {}, 0.0, p, 0.01);
  CHECK(s.Z == Approx(-4.905e-4).epsilon(1e-12));
  CHECK(s.Zd == Approx(-0.0981).epsilon(1e-12));
  RigidBodyState t;
  for (int i = 0; i < 100; ++i) t = rk4_step(t, {}, 0.0, p, 0.01);
  CHECK(std::abs(t.Zd + 9.81) < 1e-12);
  CHECK(std::abs(t.Z + 4.905) < 1e-11);
}

TEST_CASE("rk4 is fourth order on a spinning trajectory") {
  const QuadrotorParams p;
  RigidBodyState s0;
  s0.phid = 2.0;
  s0.thetad = -1.5;
  s0.psid = 3.0;
  s0.Xd = 0.5;
  const ControlVector u{7.0, 0.01, -0.02, 0.015};
  const auto endpoint = [&](double dt) {
    RigidBodyState s = s0;
    const auto n = static_cast<int>(std::lround(1.0 / dt));
    for (int i = 0; i < n; ++i) s = rk4_step(s, u, 150.0, p, dt);
    return s.to_vector();
  };
  const auto ref = endpoint(1e-5);
  const auto err = [&](double dt) {
    const auto e = endpoint(dt);
    double m = 0;
    for (std::size_t i = 0; i < e.size(); ++i) m = std::max(m, std::abs(e[i] - ref[i]));
    return m;
  };
  double prev = err(0.1);
  for (double dt : {0.05, 0.025, 0.0125}) {
    const double e = err(dt);
    CAPTURE(dt);
    CHECK(prev / e >= 8.0);
    CHECK(prev / e <= 24.0);
    prev = e;
  }
}

TEST_CASE("noise-free backstepping altitude step") {
  const QuadrotorParams p;
  const Trace t = run(noise_free(BacksteppingGains{}, {1, 0, 0, 0}), p);
  CHECK(t.rows.size() == 2001);
  CHECK(std::abs(t.rows.back().state.Z - 1.0) < 1e-3);
  for (const auto& r : t.rows) {
    for (double w : {r.speeds.w1, r.speeds.w2, r.speeds.w3, r.speeds.w4}) {
      CHECK(w >= 0.0);
      CHECK(w <= p.max_rotor_speed);
    }
  }
}

TEST_CASE("zero references keep every controller at hover") {
  const QuadrotorParams p;
  for (const ControllerGains& g : {ControllerGains{PidGains{}}, ControllerGains{LyapunovGains{}},
                                   ControllerGains{BacksteppingGains{}}}) {
    const Trace t = run(noise_free(g, {0, 0, 0, 0}), p);
    for (const auto& r : t.rows) {
      CHECK(std::abs(r.state.Z) < 1e-9);
      CHECK(std::abs(r.state.phi) < 1e-9);
      CHECK(std::abs(r.state.theta) < 1e-9);
      CHECK(std::abs(r.state.psi) < 1e-9);
    }
  }
}

TEST_CASE("runs are deterministic and noise is recorded") {
  const QuadrotorParams p;
  Scenario sc = noise_free(PidGains{}, {1, 0.2, 0.2, 0.2});
  sc.noise = NoiseSpec{NoiseColor::pink, 0.3, 0.1, 0};
  sc.seed = 17;
  const Trace a = run(sc, p);
  const Trace b = run(sc, p);
  CHECK(a == b);

  // Noise is held for ten 0.01 s steps and differs across channels.
  CHECK(a.rows[0].noise[0] == a.rows[9].noise[0]);
  CHECK(a.rows[9].noise[0] != a.rows[10].noise[0]);
  CHECK(a.rows[0].noise[0] != a.rows[0].noise[1]);

  // The recorded noise does not depend on the controller.
  sc.controller = BacksteppingGains{};
  const Trace c = run(sc, p);
  for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].noise == c.rows[i].noise);
}

TEST_CASE("sensor injection reaches the controller only") {
  const QuadrotorParams p;
  Scenario sc = noise_free(BacksteppingGains{}, {0, 0, 0, 0});
  sc.noise = NoiseSpec{NoiseColor::white, 0.001, 0.1, 0};
  sc.injection = NoiseInjection::sensor;
  sc.duration = 1;
  const Trace t = run(sc, p);
  CHECK(t.rows[0].state == RigidBodyState{});
  CHECK(t.rows[0].control.U2 != 0.0);
}

TEST_CASE("scenario validation") {
  Scenario sc;
  sc.dt = 0.03;
  CHECK_THROWS_AS(sc.validate(), ConfigError);
  sc = {};
  sc.duration = -1;
  CHECK_THROWS_AS(sc.validate(), ConfigError);
  sc = {};
  sc.noise = NoiseSpec{};
  sc.dt = 0.2;
  sc.duration = 20;
  CHECK_THROWS_AS(sc.validate(), ConfigError);
  sc = {};
  sc.reference.theta = 2.0;
  CHECK_THROWS_AS(sc.validate(), ConfigError);
  CHECK(Scenario{}.step_count() == 2000);
}

TEST_CASE("divergence keeps the partial trace") {
  QuadrotorParams p;
  p.max_rotor_speed = 1e9;
  p.max_torque = 1e9;
  Scenario sc = noise_free(LyapunovGains{}, {1e7, 0, 0, 0});
  sc.duration = 5;
  try {
    run(sc, p);
    FAIL("expected a run error");
  } catch (const SimulationError& e) {
    CHECK(e.kind() == SimulationError::Kind::divergence);
    CHECK(!e.partial_trace().rows.empty());
    CHECK(e.partial_trace().rows.size() < 501);
  }
}

TEST_CASE("tilt past the limit stops the run") {
  const QuadrotorParams p;
  Scenario sc = noise_free(BacksteppingGains{}, {0, 0, 0, 0});
  sc.initial.phi = std::acos(0.0);
  try {
    run(sc, p);
    FAIL("expected a tilt error");
  } catch (const SimulationError& e) {
    CHECK(e.kind() == SimulationError::Kind::tilt);
    CHECK(e.partial_trace().rows.empty());
  }
}

TEST_CASE("trace csv") {
  const QuadrotorParams p;
  Scenario sc = noise_free(BacksteppingGains{}, {1, 0, 0, 0});
  sc.duration = 0.05;
  std::ostringstream out;
  write_trace_csv(out, run(sc, p));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == kTraceHeader);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 25);
  }
  CHECK(rows == 6);
  CHECK(std::stod(format_double(0.1)) == 0.1);
}
