#include "endosim/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "endosim/errors.hpp"

namespace endosim {
namespace {

PiecewiseLinear through_ambient(double p_min, double p_max, double value_at_max) {
  const double value_at_min = value_at_max * p_min / p_max;
  return PiecewiseLinear({{p_min, value_at_min}, {0.0, 0.0}, {p_max, value_at_max}});
}

void check_pressure(double pressure, const BellowsModel& model) {
  if (!(pressure >= model.pressure_min && pressure <= model.pressure_max))
    throw OutOfRange("bellows pressure " + std::to_string(pressure) + " Pa outside [" +
                     std::to_string(model.pressure_min) + ", " + std::to_string(model.pressure_max) +
                     "] Pa");
}

double max_abs(const PiecewiseLinear& c) {
  double m = 0.0;
  for (const auto& p : c.points()) m = std::max(m, std::abs(p.y));
  return m;
}

}  // namespace

void BellowsModel::validate() const {
  if (!(pressure_min < 0.0 && pressure_max > 0.0))
    throw InvalidParams("bellows pressure range must straddle ambient");
  if (!(supply_max >= pressure_max)) throw InvalidParams("supply_max must be >= pressure_max");
  for (const PiecewiseLinear* c : {&axial, &height, &width, &force}) {
    if (c->empty()) throw InvalidParams("bellows curve missing");
    if (c->x_min() > pressure_min || c->x_max() < pressure_max)
      throw InvalidParams("bellows curve does not cover the operating range");
  }
  if (!axial.strictly_increasing()) throw InvalidParams("axial displacement must increase with pressure");
  if (axial(0.0) != 0.0) throw InvalidParams("axial displacement must vanish at ambient pressure");
  if (!force.strictly_increasing()) throw InvalidParams("bellows force must increase with pressure");
  if (!(force_gain > 0.0)) throw InvalidParams("force_gain must be > 0");
  if (max_abs(height) > height_limit * (1.0 + 1e-12))
    throw InvalidParams("height displacement exceeds its limit");
  if (max_abs(width) > width_limit * (1.0 + 1e-12))
    throw InvalidParams("width displacement exceeds its limit");
}

double BellowsModel::force_at(double pressure) const {
  if (!(pressure >= pressure_min && pressure <= supply_max))
    throw OutOfRange("bellows pressure " + std::to_string(pressure) + " Pa outside supply range");
  return force_gain * force.extrapolate(pressure);
}

BellowsModel make_bellows(const BellowsAnchors& a) {
  BellowsModel m;
  m.pressure_min = a.pressure_min;
  m.pressure_max = a.pressure_max;
  m.supply_max = 2.0 * a.pressure_max;
  m.axial = through_ambient(a.pressure_min, a.pressure_max, a.axial_max);
  m.height = through_ambient(a.pressure_min, a.pressure_max, a.height_max);
  m.width = through_ambient(a.pressure_min, a.pressure_max, a.width_max);
  m.force = through_ambient(a.pressure_min, a.pressure_max, a.effective_area * a.pressure_max);
  m.height_limit = a.height_max;
  m.width_limit = a.width_max;
  m.validate();
  return m;
}

BellowsModel default_bellows() { return make_bellows(BellowsAnchors{}); }

void StrutGeometry::validate() const {
  if (!(length > 0.0)) throw InvalidParams("strut length must be > 0");
  if (!(std::abs(base_offset) > 0.0 && std::abs(base_offset) < length))
    throw InvalidParams("strut base offset must satisfy 0 < |a0| < length");
}

void StrutGeometry::validate(const BellowsModel& model) const {
  validate();
  const double lo = base_offset + model.axial(model.pressure_min);
  const double hi = base_offset + model.axial(model.pressure_max);
  if (!(lo > 0.0 && hi < length))
    throw InvalidParams("strut leaves the inclined range over the bellows stroke");
}

BellowsDisplacement bellows_displacement(double pressure, const BellowsModel& model) {
  check_pressure(pressure, model);
  return {model.axial(pressure), model.height(pressure), model.width(pressure)};
}

double tip_diameter_at_displacement(double axial, const StrutGeometry& geom) {
  const double u = geom.base_offset + axial;
  if (!(std::abs(u) < geom.length))
    throw GeometryInfeasible("strut fully flattened at axial displacement " + std::to_string(axial) + " m");
  return 2.0 * (geom.hub_radius + std::sqrt(geom.length * geom.length - u * u));
}

double tip_diameter(double pressure, const StrutGeometry& geom, const BellowsModel& model) {
  check_pressure(pressure, model);
  return tip_diameter_at_displacement(model.axial(pressure), geom);
}

DiameterRange diameter_range(const StrutGeometry& geom, const BellowsModel& model) {
  return {tip_diameter(model.pressure_max, geom, model), tip_diameter(model.pressure_min, geom, model)};
}

double pressure_for_diameter(double diameter, const StrutGeometry& geom, const BellowsModel& model) {
  constexpr double kExact = 1e-12;  // m
  const DiameterRange range = diameter_range(geom, model);
  if (!(diameter >= range.min - kExact && diameter <= range.max + kExact))
    throw UnreachableDiameter("tip diameter " + std::to_string(diameter * 1e3) + " mm outside [" +
                              std::to_string(range.min * 1e3) + ", " + std::to_string(range.max * 1e3) +
                              "] mm");
  for (const auto& anchor : model.axial.points()) {
    if (anchor.x < model.pressure_min || anchor.x > model.pressure_max) continue;
    if (std::abs(tip_diameter_at_displacement(anchor.y, geom) - diameter) <= kExact) return anchor.x;
  }
  auto f = [&](double p) { return tip_diameter(p, geom, model); };
  return bisect_monotone(f, diameter, model.pressure_min, model.pressure_max, 1e-9, 1e-15);
}

StrutForces strut_force_at_displacement(double axial_force, double axial, const StrutGeometry& geom) {
  if (!(axial_force >= 0.0)) throw OutOfRange("axial strut force must be >= 0");
  const double u = geom.base_offset + axial;
  if (!(u > 0.0 && u < geom.length))
    throw GeometryInfeasible("strut not inclined at axial displacement " + std::to_string(axial) + " m");
  const double rise = std::sqrt(geom.length * geom.length - u * u);
  return {axial_force * rise / geom.length, axial_force * rise / u};
}

StrutForces strut_force_map(double axial_force, double pressure, const StrutGeometry& geom,
                            const BellowsModel& model) {
  check_pressure(pressure, model);
  return strut_force_at_displacement(axial_force, model.axial(pressure), geom);
}

double peak_normal_force(const StrutGeometry& geom, const BellowsModel& model) {
  auto normal = [&](double p) {
    return strut_force_map(std::abs(model.force_at(p)), p, geom, model).normal;
  };
  constexpr int kSamples = 4000;
  const double lo = model.pressure_min;
  const double hi = model.pressure_max;
  const double h = (hi - lo) / kSamples;
  int best = 0;
  double best_value = normal(lo);
  for (int i = 1; i <= kSamples; ++i) {
    const double v = normal(i == kSamples ? hi : lo + i * h);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  // Golden-section refinement inside the neighbouring sample cells.
  double a = std::max(lo, lo + (best - 1) * h);
  double b = std::min(hi, lo + (best + 1) * h);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  for (int i = 0; i < 80; ++i) {
    if (normal(c) > normal(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - g * (b - a);
    d = a + g * (b - a);
  }
  return std::max(best_value, normal(0.5 * (a + b)));
}

ExpansionState uniform_expansion(double pressure, const StrutGeometry& geom, const BellowsModel& model) {
  ExpansionState s;
  const double r = 0.5 * tip_diameter(pressure, geom, model);
  s.pressure.fill(pressure);
  s.radius.fill(r);
  return s;
}

}  // namespace endosim
