#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "endosim/engine.hpp"

namespace endosim::csv {

inline constexpr std::string_view kTraceHeader =
    "t_s,x_m,pipe_d_m,pressure_pa,normal_n,thrust_n,capacity_n,velocity_mps,stalled";
inline constexpr std::string_view kRpmSweepHeader = "rpm,surface,mean_velocity_mps,peak_thrust_n";
inline constexpr std::string_view kDiameterSweepHeader = "pipe_d_m,inside_pressure_pa,outside_pressure_pa,thrust_n";

/// 9 significant digits, '.' separator, no negative zero.
std::string format_number(double value);
/// Shortest text that round-trips the double exactly.
std::string format_exact(double value);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view line, char sep = ',');

std::string trace(std::span<const StepRecord> records);
std::string rpm_sweep(std::span<const RpmSweepRow> rows);
std::string diameter_sweep(std::span<const DiameterSweepRow> rows);

}  // namespace endosim::csv
