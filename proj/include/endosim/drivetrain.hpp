#pragma once

// Worm/track power transmission: pitch geometry, torque-to-thrust statics,
// the linear motor curve and the two velocity chains.
//
// All functions are pure. Units are SI except where a parameter is
// explicitly named in RPM.

namespace endosim {

/// Geometry and friction constants of the worm drive and the tracks.
struct DriveTrainParams {
  int tracks = 4;
  /// Track-to-wall friction used when no surface overrides it.
  double wall_friction = 0.2;
  /// Worm-to-track friction.
  double worm_friction = 0.15;
  /// Radial equivalent stiffness of one track [N/m]. Calibrated.
  double track_stiffness = 30.0;
  double worm_diameter = 28e-3;
  double pitch = 3e-3;
  int worm_teeth = 5;
  int track_teeth = 34;
  /// Friction/reaction torque offset between worm and tracks [N m].
  double friction_torque = 0.005;
  /// Frame width at ambient bellows pressure [m]; same quantity as the rest
  /// tip diameter.
  double frame_width = 140e-3;

  /// Throws InvalidParams naming the first violated invariant.
  void validate() const;
};

/// Linear torque-speed characteristic of the drive motor.
struct MotorCurve {
  double no_load_speed = 62.83185307179586;  // 600 rpm
  double stall_torque = 0.45;

  void validate() const;
};

/// Sign of the friction term in the worm torque balance.
///
/// `corrected` uses +mu cos(theta), the only sign under which the force
/// decomposition reproduces the closed-form torque-to-thrust relation.
/// `as_printed` keeps -mu cos(theta) for comparison.
enum class TorqueSign { corrected, as_printed };

struct WormForces {
  double thrust;  // N
  double torque;  // N m
};

/// Thread inclination, tan(theta) = p / (pi d).
double pitch_angle(const DriveTrainParams& params);

/// Axial thrust delivered by the worm for motor torque `torque`.
///
/// Negative when torque < friction_torque; callers decide what that means.
double thrust_from_torque(double torque, const DriveTrainParams& params);

/// Inverse of thrust_from_torque: motor torque needed for `thrust`.
double torque_for_thrust(double thrust, const DriveTrainParams& params);

/// Thrust at stall torque.
double max_thrust(const DriveTrainParams& params, const MotorCurve& curve);

/// T = T_M (1 - omega / omega_n). Throws OutOfRange above no-load speed.
double motor_torque_at_speed(double omega, const MotorCurve& curve);

/// Worm pitch-circle surface speed for `rpm` worm revolutions per minute.
double worm_tangential_speed(double rpm, const DriveTrainParams& params);

/// Worm teeth over track teeth.
double transmission_ratio(const DriveTrainParams& params);

/// Robot speed through the gear chain: ratio times worm surface speed.
double robot_velocity_gear(double rpm, const DriveTrainParams& params);

/// Robot speed as a lead screw: one pitch of advance per worm revolution.
double robot_velocity_lead(double omega, const DriveTrainParams& params);

/// Splits the worm normal force into axial thrust and shaft torque.
WormForces worm_force_decomposition(double normal_force, const DriveTrainParams& params,
                                    TorqueSign sign = TorqueSign::corrected);

}  // namespace endosim
