#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "endosim/contact.hpp"
#include "endosim/drivetrain.hpp"
#include "endosim/expansion.hpp"

namespace endosim {

/// Transmission efficiency of the flexible shaft and worm/track mesh.
///
/// Flat at eta_base up to the knee speed, exponential falloff beyond it.
struct SlipModel {
  double knee_speed = 18.325957145940461;  // 175 rpm
  /// Falloff rate beyond the knee [s/rad].
  double decay = 0.03;
  double eta_base = 0.7;

  void validate() const;
};

double efficiency(double omega, const SlipModel& slip);

/// Loads the tip must overcome besides wall friction.
struct Resistance {
  /// Axial drag of the tether and flexible shaft [N].
  double tether_drag = 0.0;
  /// Radial load each strut carries from the tip's own weight [N].
  double weight_load = 0.0;

  void validate() const;
};

enum class VelocityModel { gear, lead };

struct RunControls {
  double dt = 0.01;
  std::size_t max_steps = 1'000'000;
  /// A run ends once the robot has been stalled for longer than this [s].
  double stall_timeout = 1.0;
};

struct EngineConfig {
  DriveTrainParams drivetrain;
  MotorCurve motor;
  BellowsModel bellows = default_bellows();
  StrutGeometry strut;
  PipeProfile profile = uniform_pipe(0.14, 1.0, default_surface(SurfaceKind::smooth));
  /// Friction per surface kind; overrides the coefficient stored on stations.
  std::map<SurfaceKind, SurfaceSpec> surfaces = {
      {SurfaceKind::smooth, default_surface(SurfaceKind::smooth)},
      {SurfaceKind::tissue, default_surface(SurfaceKind::tissue)},
      {SurfaceKind::foam, default_surface(SurfaceKind::foam)},
      {SurfaceKind::custom, default_surface(SurfaceKind::custom)}};
  SlipModel slip;
  /// Per-surface eta_base; surfaces not listed use slip.eta_base.
  std::map<SurfaceKind, double> surface_efficiency;
  Resistance resistance;
  double rpm = 300.0;
  VelocityModel velocity_model = VelocityModel::gear;
  ContactBracket bracket = ContactBracket::verbatim;
  RunControls run;

  void validate() const;

  SurfaceSpec resolve(const SurfaceSpec& station_surface) const;
  SlipModel slip_for(SurfaceKind kind) const;
};

/// Quasi-static equilibrium of the tip at one lumen diameter.
struct OperatingPoint {
  double lumen_diameter = 0.0;
  double tip_diameter = 0.0;
  double pressure = 0.0;
  double normal_force = 0.0;  // per track
  double raw_thrust = 0.0;    // worm thrust at the motor operating point
  double capacity = 0.0;
  double efficiency = 0.0;
  double thrust = 0.0;  // effective
  double velocity = 0.0;
  bool stalled = false;
  bool motor_limited = false;
  /// Bellows saturated at supply_max before reaching the target normal force.
  bool force_limited = false;
};

OperatingPoint operating_point(const EngineConfig& config, double lumen_diameter, const SurfaceSpec& surface,
                               double rpm);

/// Bellows pressure that holds the tip at `lumen_diameter` while the struts
/// push `normal_target` (plus the weight share) against the wall.
double required_pressure(double lumen_diameter, double normal_target, const Resistance& resistance,
                         const StrutGeometry& geom, const BellowsModel& model);

struct RobotState {
  double x = 0.0;
  double time = 0.0;
  double rpm = 0.0;
  ExpansionState expansion;
  bool stalled = false;
  double stalled_for = 0.0;
};

/// One CSV row. Forces are evaluated at the start of the step; `t` and `x`
/// are the end-of-step time and position.
struct StepRecord {
  double t = 0.0;
  double x = 0.0;
  double pipe_diameter = 0.0;
  double pressure = 0.0;
  double normal_force = 0.0;
  double thrust = 0.0;
  double capacity = 0.0;
  double velocity = 0.0;
  bool stalled = false;
  bool motor_limited = false;
};

std::pair<RobotState, StepRecord> step(const RobotState& state, double dt, const EngineConfig& config);

std::vector<StepRecord> run(const EngineConfig& config);

double mean_velocity(std::span<const StepRecord> trace);
double peak_thrust(std::span<const StepRecord> trace);

struct SweepOptions {
  bool parallel = true;
};

struct RpmSweepRow {
  double rpm;
  SurfaceKind surface;
  double mean_velocity;
  double peak_thrust;
};

/// One run per (rpm, surface) pair over the config's profile relined with
/// that surface. Rows are rpm-major in input order.
std::vector<RpmSweepRow> sweep_rpm(const EngineConfig& config, std::span<const double> rpms,
                                   std::span<const SurfaceKind> surfaces, SweepOptions options = {});

struct DiameterSweepRow {
  double diameter;
  double inside_pressure;
  double outside_pressure;
  double thrust;
};

/// Inside pressure includes the wall and weight force balance; outside is
/// the unconstrained pressure for the same diameter. Uses the surface of the
/// config's first station and config.rpm.
std::vector<DiameterSweepRow> sweep_diameter(const EngineConfig& config, std::span<const double> diameters,
                                             SweepOptions options = {});

}  // namespace endosim
