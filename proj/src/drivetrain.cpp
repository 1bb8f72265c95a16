#include "endosim/drivetrain.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "endosim/errors.hpp"

namespace endosim {
namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* what) {
  if (!ok) throw InvalidParams(what);
}

}  // namespace

void DriveTrainParams::validate() const {
  require(tracks >= 1, "tracks must be >= 1");
  require(wall_friction >= 0.0, "wall_friction must be >= 0");
  require(worm_friction >= 0.0, "worm_friction must be >= 0");
  require(track_stiffness > 0.0, "track_stiffness must be > 0");
  require(worm_diameter > 0.0, "worm_diameter must be > 0");
  require(pitch > 0.0, "pitch must be > 0");
  require(worm_teeth >= 1, "worm_teeth must be >= 1");
  require(track_teeth >= 1, "track_teeth must be >= 1");
  require(friction_torque >= 0.0, "friction_torque must be >= 0");
  require(frame_width > 0.0, "frame_width must be > 0");
  require(kPi * worm_diameter > worm_friction * pitch,
          "pi * worm_diameter must exceed worm_friction * pitch");
}

void MotorCurve::validate() const {
  require(no_load_speed > 0.0, "no_load_speed must be > 0");
  require(stall_torque > 0.0, "stall_torque must be > 0");
}

double pitch_angle(const DriveTrainParams& params) {
  return std::atan(params.pitch / (kPi * params.worm_diameter));
}

namespace {

// Thrust per unit net torque, 2 (pi d - mu p) / (d (mu pi d + p)).
double thrust_gain(const DriveTrainParams& params) {
  const double d = params.worm_diameter;
  const double p = params.pitch;
  const double mu = params.worm_friction;
  if (!(kPi * d > mu * p)) throw InvalidParams("pi * worm_diameter must exceed worm_friction * pitch");
  return 2.0 * (kPi * d - mu * p) / (d * (mu * kPi * d + p));
}

}  // namespace

double thrust_from_torque(double torque, const DriveTrainParams& params) {
  if (!(torque >= 0.0)) throw OutOfRange("motor torque must be >= 0");
  return thrust_gain(params) * (torque - params.friction_torque);
}

double torque_for_thrust(double thrust, const DriveTrainParams& params) {
  return thrust / thrust_gain(params) + params.friction_torque;
}

double max_thrust(const DriveTrainParams& params, const MotorCurve& curve) {
  return thrust_from_torque(curve.stall_torque, params);
}

double motor_torque_at_speed(double omega, const MotorCurve& curve) {
  if (!(omega >= 0.0)) throw OutOfRange("motor speed must be >= 0");
  if (omega > curve.no_load_speed)
    throw OutOfRange("motor speed " + std::to_string(omega) + " rad/s exceeds no-load speed " +
                     std::to_string(curve.no_load_speed) + " rad/s");
  if (omega == curve.no_load_speed) return 0.0;
  return curve.stall_torque * (1.0 - omega / curve.no_load_speed);
}

double worm_tangential_speed(double rpm, const DriveTrainParams& params) {
  if (!(rpm >= 0.0)) throw OutOfRange("worm speed must be >= 0");
  return kPi * params.worm_diameter * rpm / 60.0;
}

double transmission_ratio(const DriveTrainParams& params) {
  return static_cast<double>(params.worm_teeth) / static_cast<double>(params.track_teeth);
}

double robot_velocity_gear(double rpm, const DriveTrainParams& params) {
  return transmission_ratio(params) * worm_tangential_speed(rpm, params);
}

double robot_velocity_lead(double omega, const DriveTrainParams& params) {
  if (!(omega >= 0.0)) throw OutOfRange("motor speed must be >= 0");
  return omega * params.pitch / (2.0 * kPi);
}

WormForces worm_force_decomposition(double normal_force, const DriveTrainParams& params,
                                    TorqueSign sign) {
  if (!(normal_force >= 0.0)) throw OutOfRange("worm normal force must be >= 0");
  const double theta = pitch_angle(params);
  const double mu = params.worm_friction;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double friction = sign == TorqueSign::corrected ? mu * c : -mu * c;
  return {normal_force * (c - mu * s),
          0.5 * params.worm_diameter * normal_force * (s + friction) + params.friction_torque};
}

}  // namespace endosim
