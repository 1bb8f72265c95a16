#pragma once

#include <array>

#include "endosim/interp.hpp"

namespace endosim {

/// Pressure-driven bellows: displacement and force curves over the
/// operating range, all gauge pressures in pascals.
///
/// Curves are piecewise linear through anchors. Negative pressure contracts
/// the bellows (negative axial displacement); positive pressure extends it.
struct BellowsModel {
  double pressure_min = -10100.0;
  double pressure_max = 28300.0;
  /// Highest pressure the supply can hold when the wall blocks further
  /// extension. Force beyond pressure_max follows the last force segment.
  double supply_max = 56600.0;

  PiecewiseLinear axial;
  PiecewiseLinear height;
  PiecewiseLinear width;
  /// Axial force the bellows exerts on the strut base [N].
  PiecewiseLinear force;
  /// Calibrated multiplier on `force`.
  double force_gain = 1.0;

  double height_limit = 6.3e-3;
  double width_limit = 2.12e-3;

  void validate() const;

  /// Axial bellows force at `pressure`, valid on [pressure_min, supply_max].
  double force_at(double pressure) const;
};

/// Measured extremes a bellows model is built from.
struct BellowsAnchors {
  double pressure_min = -10100.0;
  double pressure_max = 28300.0;
  double axial_max = 8.98e-3;
  double height_max = 6.3e-3;
  double width_max = 2.12e-3;
  /// Axial force per pascal before calibration [m^2].
  double effective_area = 3.9870556e-4;
};

/// Curves through (pressure_min, .), (0, 0), (pressure_max, max). The
/// contracted end is the linear continuation of the extension branch.
BellowsModel make_bellows(const BellowsAnchors& anchors);

BellowsModel default_bellows();

/// Equivalent single-link strut: the base slides axially with the bellows,
/// the tip rides radially on the track frame.
struct StrutGeometry {
  /// Strut length [m].
  double length = 0.16619309433392906;
  /// Axial offset of the base from the tip pivot at ambient pressure [m].
  double base_offset = 0.14703673365479417;
  /// Radius of the line the strut bases move along [m].
  double hub_radius = -0.007461884565348423;

  void validate() const;
  /// Also checks the strut stays strictly inclined over the bellows stroke.
  void validate(const BellowsModel& model) const;
};

struct BellowsDisplacement {
  double axial;
  double height;
  double width;
};

/// Four independently pressurised units.
struct ExpansionState {
  std::array<double, 4> pressure{};
  std::array<double, 4> radius{};
};

struct StrutForces {
  /// Component perpendicular to the strut at its top pivot [N].
  double normal;
  /// Radial push of the tip toward the wall [N].
  double radial;
};

struct DiameterRange {
  double min;
  double max;
};

BellowsDisplacement bellows_displacement(double pressure, const BellowsModel& model);

double tip_diameter_at_displacement(double axial, const StrutGeometry& geom);
double tip_diameter(double pressure, const StrutGeometry& geom, const BellowsModel& model);

/// Diameters at pressure_max and pressure_min.
DiameterRange diameter_range(const StrutGeometry& geom, const BellowsModel& model);

/// Inverse of tip_diameter by bisection. Anchor pressures are returned
/// exactly when the target hits their diameter.
double pressure_for_diameter(double diameter, const StrutGeometry& geom, const BellowsModel& model);

StrutForces strut_force_at_displacement(double axial_force, double axial, const StrutGeometry& geom);
StrutForces strut_force_map(double axial_force, double pressure, const StrutGeometry& geom,
                            const BellowsModel& model);

/// Peak |normal| strut force produced by the bellows over its operating range.
double peak_normal_force(const StrutGeometry& geom, const BellowsModel& model);

ExpansionState uniform_expansion(double pressure, const StrutGeometry& geom, const BellowsModel& model);

}  // namespace endosim
