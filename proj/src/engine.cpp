#include "endosim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "endosim/errors.hpp"
#include "endosim/units.hpp"
#include "parallel.hpp"

namespace endosim {

void SlipModel::validate() const {
  if (!(knee_speed >= 0.0)) throw InvalidParams("slip knee speed must be >= 0");
  if (!(decay >= 0.0)) throw InvalidParams("slip decay must be >= 0");
  if (!(eta_base > 0.0 && eta_base <= 1.0)) throw InvalidParams("slip eta_base must lie in (0, 1]");
}

double efficiency(double omega, const SlipModel& slip) {
  if (!(omega >= 0.0)) throw OutOfRange("motor speed must be >= 0");
  if (omega <= slip.knee_speed) return slip.eta_base;
  return slip.eta_base * std::exp(-slip.decay * (omega - slip.knee_speed));
}

void Resistance::validate() const {
  if (!(tether_drag >= 0.0)) throw InvalidParams("tether drag must be >= 0");
  if (!(weight_load >= 0.0)) throw InvalidParams("weight load must be >= 0");
}

void EngineConfig::validate() const {
  drivetrain.validate();
  motor.validate();
  bellows.validate();
  strut.validate(bellows);
  slip.validate();
  for (const auto& [kind, eta] : surface_efficiency) {
    SlipModel s = slip;
    s.eta_base = eta;
    s.validate();
  }
  for (const auto& [kind, surface] : surfaces) surface.validate();
  resistance.validate();
  if (!(rpm >= 0.0)) throw InvalidParams("commanded rpm must be >= 0");
  if (units::rpm_to_rad_s(rpm) > motor.no_load_speed)
    throw InvalidParams("commanded rpm exceeds the motor no-load speed");
  if (!(run.dt > 0.0)) throw InvalidParams("dt must be > 0");
  if (!(run.stall_timeout >= 0.0)) throw InvalidParams("stall timeout must be >= 0");
}

SurfaceSpec EngineConfig::resolve(const SurfaceSpec& station_surface) const {
  auto it = surfaces.find(station_surface.kind);
  return it == surfaces.end() ? station_surface : it->second;
}

SlipModel EngineConfig::slip_for(SurfaceKind kind) const {
  SlipModel s = slip;
  if (auto it = surface_efficiency.find(kind); it != surface_efficiency.end()) s.eta_base = it->second;
  return s;
}

double required_pressure(double lumen_diameter, double normal_target, const Resistance& resistance,
                         const StrutGeometry& geom, const BellowsModel& model) {
  if (!(normal_target >= 0.0)) throw OutOfRange("normal force target must be >= 0");
  const double outside = pressure_for_diameter(lumen_diameter, geom, model);
  const double demand = normal_target + resistance.weight_load;
  if (demand <= 0.0) return outside;

  // The wall fixes the strut pose; extra pressure only adds force.
  const double axial = model.axial(outside);
  const double base_force = model.force_at(outside);
  auto radial = [&](double p) {
    return strut_force_at_displacement(model.force_at(p) - base_force, axial, geom).radial;
  };
  if (radial(model.supply_max) < demand)
    throw ForceInfeasible("strut cannot push " + std::to_string(demand) + " N at " +
                          std::to_string(lumen_diameter * 1e3) + " mm within the supply pressure");
  return bisect_monotone(radial, demand, outside, model.supply_max, 1e-9, 1e-12);
}

OperatingPoint operating_point(const EngineConfig& config, double lumen_diameter, const SurfaceSpec& surface,
                               double rpm) {
  const DiameterRange range = diameter_range(config.strut, config.bellows);
  if (lumen_diameter < range.min - 1e-12)
    throw UnreachableDiameter("lumen " + std::to_string(lumen_diameter * 1e3) +
                              " mm is narrower than the fully contracted tip (" + std::to_string(range.min * 1e3) +
                              " mm)");
  const DriveTrainParams& dt = config.drivetrain;
  OperatingPoint op;
  op.lumen_diameter = lumen_diameter;

  if (lumen_diameter >= range.max) {
    // Fully expanded and still short of the wall.
    op.tip_diameter = range.max;
    op.pressure = config.bellows.pressure_min;
    op.normal_force = contact_state(op.tip_diameter, lumen_diameter, dt, config.bracket).normal_force_per_track;
  } else {
    op.tip_diameter = lumen_diameter;
    const ContactState contact = contact_state(op.tip_diameter, lumen_diameter, dt, config.bracket);
    try {
      op.pressure = required_pressure(lumen_diameter, contact.normal_force_per_track, config.resistance,
                                      config.strut, config.bellows);
      op.normal_force = contact.normal_force_per_track;
    } catch (const ForceInfeasible&) {
      // Supply saturated: the wall sees only what the strut can still push.
      const BellowsModel& b = config.bellows;
      const double outside = pressure_for_diameter(lumen_diameter, config.strut, b);
      const double extra = b.force_at(b.supply_max) - b.force_at(outside);
      const double available =
          strut_force_at_displacement(extra, b.axial(outside), config.strut).radial - config.resistance.weight_load;
      op.pressure = b.supply_max;
      op.normal_force = std::clamp(available, 0.0, contact.normal_force_per_track);
      op.force_limited = true;
    }
  }

  op.capacity = static_cast<double>(dt.tracks) * surface.wall_friction * op.normal_force;
  const double omega = units::rpm_to_rad_s(rpm);
  op.raw_thrust = thrust_from_torque(motor_torque_at_speed(omega, config.motor), dt);
  op.efficiency = efficiency(omega, config.slip_for(surface.kind));
  const double drive = std::max(op.raw_thrust, 0.0);
  op.thrust = op.efficiency * std::min(drive, op.capacity);

  const double axial_load = config.resistance.tether_drag;
  op.motor_limited = op.efficiency * drive < axial_load;
  op.stalled = op.capacity <= 0.0 || op.thrust <= 0.0 || op.thrust < axial_load;
  if (!op.stalled) {
    const double v = config.velocity_model == VelocityModel::gear ? robot_velocity_gear(rpm, dt)
                                                                  : robot_velocity_lead(omega, dt);
    op.velocity = op.efficiency * v;
  }
  return op;
}

std::pair<RobotState, StepRecord> step(const RobotState& state, double dt, const EngineConfig& config) {
  if (!(dt > 0.0)) throw OutOfRange("dt must be > 0");
  const PipeSample here = pipe_diameter_at(config.profile, state.x);
  const SurfaceSpec surface = config.resolve(here.surface);
  const OperatingPoint op = operating_point(config, here.diameter, surface, state.rpm);

  RobotState next = state;
  next.time = state.time + dt;
  next.stalled = op.stalled;
  next.stalled_for = op.stalled ? state.stalled_for + dt : 0.0;
  next.x = op.stalled ? state.x : std::min(state.x + op.velocity * dt, config.profile.length());
  next.expansion.pressure.fill(op.pressure);
  next.expansion.radius.fill(0.5 * op.tip_diameter);

  StepRecord rec;
  rec.t = next.time;
  rec.x = next.x;
  rec.pipe_diameter = here.diameter;
  rec.pressure = op.pressure;
  rec.normal_force = op.normal_force;
  rec.thrust = op.thrust;
  rec.capacity = op.capacity;
  rec.velocity = op.velocity;
  rec.stalled = op.stalled;
  rec.motor_limited = op.motor_limited;
  return {next, rec};
}

std::vector<StepRecord> run(const EngineConfig& config) {
  config.validate();
  std::vector<StepRecord> trace;
  const double length = config.profile.length();
  if (!(length > 0.0)) return trace;

  RobotState state;
  state.rpm = config.rpm;
  while (state.x < length && trace.size() < config.run.max_steps) {
    auto [next, rec] = step(state, config.run.dt, config);
    trace.push_back(rec);
    state = next;
    if (state.stalled && state.stalled_for > config.run.stall_timeout) break;
  }
  return trace;
}

double mean_velocity(std::span<const StepRecord> trace) {
  if (trace.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : trace) sum += r.velocity;
  return sum / static_cast<double>(trace.size());
}

double peak_thrust(std::span<const StepRecord> trace) {
  double m = 0.0;
  for (const auto& r : trace) m = std::max(m, r.thrust);
  return m;
}

std::vector<RpmSweepRow> sweep_rpm(const EngineConfig& config, std::span<const double> rpms,
                                   std::span<const SurfaceKind> surfaces, SweepOptions options) {
  if (rpms.empty()) throw InvalidParams("rpm sweep needs at least one speed");
  if (surfaces.empty()) throw InvalidParams("rpm sweep needs at least one surface");
  std::vector<RpmSweepRow> rows(rpms.size() * surfaces.size());
  detail::parallel_for(rows.size(), options.parallel, [&](std::size_t i) {
    const double rpm = rpms[i / surfaces.size()];
    const SurfaceKind kind = surfaces[i % surfaces.size()];
    EngineConfig c = config;
    c.rpm = rpm;
    c.profile = config.profile.with_surface(config.resolve(default_surface(kind)));
    const auto trace = run(c);
    rows[i] = {rpm, kind, mean_velocity(trace), peak_thrust(trace)};
  });
  return rows;
}

std::vector<DiameterSweepRow> sweep_diameter(const EngineConfig& config, std::span<const double> diameters,
                                             SweepOptions options) {
  if (diameters.empty()) throw InvalidParams("diameter sweep needs at least one diameter");
  config.validate();
  const SurfaceSpec surface = config.resolve(config.profile.stations().front().surface);
  std::vector<DiameterSweepRow> rows(diameters.size());
  detail::parallel_for(rows.size(), options.parallel, [&](std::size_t i) {
    const double w = diameters[i];
    const double outside = pressure_for_diameter(w, config.strut, config.bellows);
    const ContactState contact = contact_state(w, w, config.drivetrain, config.bracket);
    const double inside =
        required_pressure(w, contact.normal_force_per_track, config.resistance, config.strut, config.bellows);
    const OperatingPoint op = operating_point(config, w, surface, config.rpm);
    rows[i] = {w, inside, outside, op.thrust};
  });
  return rows;
}

}  // namespace endosim
