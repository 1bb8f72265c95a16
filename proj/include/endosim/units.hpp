#pragma once

#include <numbers>

// Everything inside the library is SI. These helpers exist for the
// config/CSV boundary and for tests that state values in millimetres, millibar or RPM.
namespace endosim::units {

inline constexpr double kMillimeter = 1e-3;
inline constexpr double kCentimeter = 1e-2;
inline constexpr double kMillibar = 100.0;  // Pa
inline constexpr double kGravity = 9.80665;

constexpr double rpm_to_rad_s(double rpm) { return rpm * 2.0 * std::numbers::pi / 60.0; }
constexpr double rad_s_to_rpm(double omega) { return omega * 60.0 / (2.0 * std::numbers::pi); }

}  // namespace endosim::units
