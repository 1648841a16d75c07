#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "quadsim/errors.hpp"
#include "quadsim/metrics.hpp"

using namespace quadsim;
using doctest::Approx;

namespace {

struct Series {
  std::vector<double> t, y;
};

Series first_order(double dt, double end) {
  Series s;
  for (int i = 0; i * dt <= end + 1e-12; ++i) {
    s.t.push_back(i * dt);
    s.y.push_back(1.0 - std::exp(-i * dt));
  }
  return s;
}

std::vector<double> grid(std::size_t n, double dt = 1.0) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = i * dt;
  return t;
}

}  // namespace

TEST_CASE("first-order response") {
  const Series s = first_order(1e-3, 10);
  const StepChannel ch{s.t, s.y, 0, 1};
  CHECK(std::abs(*rise_time(ch) - std::log(9.0)) < 1e-3);
  CHECK(std::abs(*settling_time(ch, 2) - std::log(50.0)) < 1e-3);
  CHECK(overshoot(ch) == 0.0);
}

TEST_CASE("overshoot examples") {
  const std::vector<double> y{0, 0.5, 1.2, 0.95, 1.0};
  const auto t = grid(5);
  CHECK(overshoot({t, y, 0, 1}) == 20.0);

  const std::vector<double> neg{0, -0.5, -1.2, -0.95, -1.0};
  CHECK(overshoot({t, neg, 0, -1}) == Approx(20.0).epsilon(1e-12));

  const std::vector<double> mono{0, 0.5, 0.8, 0.95, 1.0};
  CHECK(overshoot({t, mono, 0, 1}) == 0.0);
}

TEST_CASE("rise time edge cases") {
  const auto t = grid(5, 0.01);
  const std::vector<double> flat(5, 0.0);
  CHECK_FALSE(rise_time({t, flat, 0, 1}).has_value());

  const std::vector<double> jump{0, 1, 1, 1, 1};
  const auto r = rise_time({t, jump, 0, 1});
  REQUIRE(r.has_value());
  CHECK(*r <= 0.01 + 1e-15);
  CHECK(*r == Approx(0.008).epsilon(1e-12));
}

TEST_CASE("settling edge cases") {
  const auto t = grid(5);
  const std::vector<double> at_ref(5, 1.0);
  CHECK(*settling_time({t, at_ref, 0, 1}, 2) == 0.0);
  const std::vector<double> ringing{0, 1.1, 0.9, 1.1, 0.9};
  CHECK_FALSE(settling_time({t, ringing, 0, 1}, 2).has_value());
  // Last excursion between samples 2 and 3 crosses the upper band edge at 1.02.
  const std::vector<double> late{0, 1.5, 1.1, 1.0, 1.0};
  CHECK(*settling_time({t, late, 0, 1}, 2) == Approx(2.8).epsilon(1e-12));
  CHECK_THROWS_AS(settling_time({t, late, 0, 1}, 0), DomainError);
}

TEST_CASE("step channel validation") {
  const auto t = grid(3);
  const std::vector<double> y{0, 1, 1};
  CHECK_THROWS_AS(overshoot({t, y, 1, 1}), DomainError);
  const std::vector<double> shorter{0, 1};
  CHECK_THROWS_AS(overshoot({t, shorter, 0, 1}), DomainError);
}

TEST_CASE("metrics are scale invariant") {
  const Series s = first_order(0.01, 8);
  std::vector<double> wobble = s.y;
  for (std::size_t i = 0; i < wobble.size(); ++i) wobble[i] += 0.1 * std::sin(3.0 * s.t[i]) * std::exp(-0.3 * s.t[i]);
  const StepChannel base{s.t, wobble, 0, 1};
  const auto m0 = response_metrics(base, 2);
  for (double c : {2.0, -0.5, 4.0, -8.0}) {
    std::vector<double> scaled = wobble;
    for (double& v : scaled) v *= c;
    const auto m = response_metrics({s.t, scaled, 0, c}, 2);
    CAPTURE(c);
    CHECK(m.rise_time == m0.rise_time);
    CHECK(m.overshoot_pct == m0.overshoot_pct);
    CHECK(m.settling_time == m0.settling_time);
  }
  for (double c : {3.0, -0.7}) {
    std::vector<double> scaled = wobble;
    for (double& v : scaled) v = v * c + 5.0;
    const auto m = response_metrics({s.t, scaled, 5.0, c + 5.0}, 2);
    CHECK(*m.rise_time == Approx(*m0.rise_time).epsilon(1e-9));
    CHECK(m.overshoot_pct == Approx(m0.overshoot_pct).epsilon(1e-9));
    CHECK(*m.settling_time == Approx(*m0.settling_time).epsilon(1e-9));
  }
}

TEST_CASE("metrics survive subsampling by two") {
  const double dt = 0.01;
  const Series s = first_order(dt, 10);
  std::vector<double> y = s.y;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.3 * std::sin(2.0 * s.t[i]) * std::exp(-0.5 * s.t[i]);
  Series half;
  for (std::size_t i = 0; i < y.size(); i += 2) {
    half.t.push_back(s.t[i]);
    half.y.push_back(y[i]);
  }
  const auto full = response_metrics({s.t, y, 0, 1}, 2);
  const auto sub = response_metrics({half.t, half.y, 0, 1}, 2);
  CHECK(std::abs(*full.rise_time - *sub.rise_time) <= dt);
  CHECK(std::abs(*full.settling_time - *sub.settling_time) <= dt);
  CHECK(std::abs(full.overshoot_pct - sub.overshoot_pct) < 0.1);
}

TEST_CASE("analyze a noise-free hover marks every channel degenerate") {
  const QuadrotorParams p;
  Scenario sc;
  sc.reference = {0, 0, 0, 0};
  sc.duration = 1;
  const auto out = analyze(run(sc, p), sc.reference, 2);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(out[i].channel == kTableChannels[i]);
    CHECK_FALSE(out[i].metrics.has_value());
  }
}

TEST_CASE("analyze a seeded backstepping run under white noise") {
  const QuadrotorParams p;
  Scenario sc;
  sc.reference = {1, 0.2, 0.2, 0.2};
  sc.noise = NoiseSpec{};
  sc.seed = 1;
  const auto out = analyze(run(sc, p), sc.reference, 2);
  for (const auto& c : out) {
    CAPTURE(to_string(c.channel));
    REQUIRE(c.metrics.has_value());
    CHECK(std::isfinite(c.metrics->overshoot_pct));
    CHECK(c.metrics->settling_time.has_value());
  }
}

TEST_CASE("metrics csv") {
  std::vector<MetricsRow> rows{
      {"pid", "white", {Channel::roll, ResponseMetrics{0.5, 12.5, std::nullopt, 2}}},
      {"pid", "white", {Channel::yaw, std::nullopt}}};
  std::ostringstream out;
  write_metrics_csv(out, rows);
  CHECK(out.str() == std::string(kMetricsHeader) +
                         "\npid,roll,white,0.5,12.5,-,2\npid,yaw,white,-,-,-,-\n");
  CHECK(format_metric(std::nullopt) == "-");
  CHECK(format_metric(INFINITY) == "-");
}
