#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "endosim/drivetrain.hpp"
#include "endosim/errors.hpp"
#include "endosim/units.hpp"
#include "oracles.hpp"

using namespace endosim;

namespace {

DriveTrainParams frictionless() {
  DriveTrainParams p;
  p.worm_friction = 0.0;
  p.friction_torque = 0.0;
  return p;
}

}  // namespace

TEST_SUITE("drivetrain") {
  TEST_CASE("pitch angle") {
    const DriveTrainParams p;
    CHECK(pitch_angle(p) == doctest::Approx(0.034092).epsilon(1e-5));
    CHECK(pitch_angle(p) == doctest::Approx(oracle::pitch_angle(3e-3, 28e-3)).epsilon(1e-14));

    DriveTrainParams q = p;
    q.pitch = 1e-12;
    CHECK(pitch_angle(q) == doctest::Approx(0.0));
    q.pitch = std::numbers::pi * q.worm_diameter;
    CHECK(pitch_angle(q) == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-14));
  }

  TEST_CASE("thrust from torque") {
    const DriveTrainParams p = frictionless();
    CHECK(thrust_from_torque(0.01, p) == doctest::Approx(20.944).epsilon(1e-4));
    CHECK(thrust_from_torque(0.01, p) == doctest::Approx(2.0 * std::numbers::pi * 0.01 / 3e-3).epsilon(1e-12));

    DriveTrainParams f;
    CHECK(thrust_from_torque(f.friction_torque, f) == 0.0);
    double last = thrust_from_torque(0.0, f);
    for (double t = 0.001; t < 0.5; t += 0.001) {
      const double v = thrust_from_torque(t, f);
      CHECK(v > last);
      last = v;
    }
    CHECK(torque_for_thrust(thrust_from_torque(0.2, f), f) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK_THROWS_AS(thrust_from_torque(-0.1, f), OutOfRange);
  }

  TEST_CASE("max thrust") {
    const DriveTrainParams p;
    const MotorCurve m;
    CHECK(max_thrust(p, m) == thrust_from_torque(m.stall_torque, p));

    MotorCurve at_friction = m;
    at_friction.stall_torque = p.friction_torque;
    CHECK(max_thrust(p, at_friction) == 0.0);

    MotorCurve small;
    small.stall_torque = 0.05;
    CHECK(max_thrust(frictionless(), small) == doctest::Approx(104.72).epsilon(1e-4));
  }

  TEST_CASE("motor torque-speed line") {
    const MotorCurve m;
    CHECK(motor_torque_at_speed(0.0, m) == m.stall_torque);
    CHECK(motor_torque_at_speed(m.no_load_speed, m) == 0.0);
    CHECK(motor_torque_at_speed(m.no_load_speed / 2.0, m) == doctest::Approx(m.stall_torque / 2.0));
    CHECK_THROWS_AS(motor_torque_at_speed(m.no_load_speed * 1.01, m), OutOfRange);
  }

  TEST_CASE("velocity chain") {
    const DriveTrainParams p;
    CHECK(worm_tangential_speed(300.0, p) == doctest::Approx(0.43982).epsilon(1e-5));
    CHECK(worm_tangential_speed(0.0, p) == 0.0);
    CHECK(worm_tangential_speed(200.0, p) == doctest::Approx(2.0 * worm_tangential_speed(100.0, p)));

    CHECK(transmission_ratio(p) == doctest::Approx(0.147059).epsilon(1e-6));
    CHECK(robot_velocity_gear(300.0, p) * 1e3 == doctest::Approx(64.68).epsilon(1e-4));
    CHECK(robot_velocity_gear(300.0, p) == doctest::Approx(oracle::gear_velocity(300.0, 28e-3, 5, 34)).epsilon(1e-14));
    CHECK(robot_velocity_gear(0.0, p) == 0.0);

    const double omega = units::rpm_to_rad_s(300.0);
    CHECK(omega == doctest::Approx(31.416).epsilon(1e-5));
    CHECK(robot_velocity_lead(omega, p) * 1e3 == doctest::Approx(15.0).epsilon(1e-12));
    CHECK(robot_velocity_lead(omega, p) == doctest::Approx(oracle::lead_velocity(300.0, 3e-3)).epsilon(1e-14));
    CHECK(robot_velocity_lead(0.0, p) == 0.0);
    DriveTrainParams q = p;
    q.pitch *= 2.0;
    CHECK(robot_velocity_lead(omega, q) == doctest::Approx(2.0 * robot_velocity_lead(omega, p)));
  }

  TEST_CASE("force decomposition limits") {
    DriveTrainParams p = frictionless();
    p.pitch = 1e-12;
    const auto f = worm_force_decomposition(5.0, p);
    CHECK(f.thrust == doctest::Approx(5.0));
    CHECK(f.torque == doctest::Approx(p.friction_torque));

    const DriveTrainParams q;
    const auto zero = worm_force_decomposition(0.0, q);
    CHECK(zero.thrust == 0.0);
    CHECK(zero.torque == q.friction_torque);
  }

  TEST_CASE("force decomposition composes to the torque-thrust gain") {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> pitch(0.5e-3, 10e-3), diam(5e-3, 60e-3), mu(0.0, 0.6), tf(0.0, 0.05),
        normal(0.1, 200.0);
    for (int i = 0; i < 1000; ++i) {
      DriveTrainParams p;
      p.pitch = pitch(rng);
      p.worm_diameter = diam(rng);
      p.worm_friction = mu(rng);
      p.friction_torque = tf(rng);
      REQUIRE_NOTHROW(p.validate());
      const auto f = worm_force_decomposition(normal(rng), p, TorqueSign::corrected);
      const double ratio = f.thrust / (f.torque - p.friction_torque);
      const double expect = oracle::thrust_gain(p.pitch, p.worm_diameter, p.worm_friction);
      CHECK(std::abs(ratio - expect) <= 1e-9 * std::abs(expect));
    }
  }

  TEST_CASE("as-printed friction sign breaks the composition when mu > 0") {
    DriveTrainParams p;
    p.worm_friction = 0.15;
    const auto f = worm_force_decomposition(10.0, p, TorqueSign::as_printed);
    const double ratio = f.thrust / (f.torque - p.friction_torque);
    const double expect = oracle::thrust_gain(p.pitch, p.worm_diameter, p.worm_friction);
    CHECK(std::abs(ratio - expect) > 1e-3 * expect);

    p.worm_friction = 0.0;
    const auto g = worm_force_decomposition(10.0, p, TorqueSign::as_printed);
    CHECK(g.thrust / (g.torque - p.friction_torque) ==
          doctest::Approx(oracle::thrust_gain(p.pitch, p.worm_diameter, 0.0)).epsilon(1e-12));
  }

  TEST_CASE("parameter validation") {
    DriveTrainParams p;
    CHECK_NOTHROW(p.validate());
    p.pitch = -1e-3;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("pitch"), InvalidParams);
    p = {};
    p.tracks = 0;
    CHECK_THROWS_AS(p.validate(), InvalidParams);
    MotorCurve m;
    m.stall_torque = 0.0;
    CHECK_THROWS_AS(m.validate(), InvalidParams);
  }
}
