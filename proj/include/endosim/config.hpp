#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "endosim/engine.hpp"

namespace endosim {

enum class CalibrationSource { none, builtin, file };

/// Everything one CLI invocation needs. Engine fields are SI.
struct ScenarioConfig {
  EngineConfig engine;
  std::vector<double> sweep_rpms;       // rpm
  std::vector<double> sweep_diameters;  // m
  std::vector<SurfaceKind> sweep_surfaces = {SurfaceKind::smooth, SurfaceKind::tissue, SurfaceKind::foam};
  std::string output;
  CalibrationSource calibration = CalibrationSource::none;
  std::string calibration_file;
};

/// Parses the scenario text format described in the README. Throws
/// ConfigError naming the key and line for any unknown key, missing or
/// mismatched unit, or violated invariant.
ScenarioConfig parse_config(std::string_view text);

/// Reads and parses `path`. A relative calibration file is resolved against
/// the config's directory.
ScenarioConfig load_config(const std::filesystem::path& path);

/// Applies the calibration source, if any, to `scenario.engine`.
void apply_calibration(ScenarioConfig& scenario);

/// Parses "<number> <unit>" into SI for the given dimension. Exposed for
/// the CLI flag parsers.
enum class Dimension { length, pressure, speed, torque, force, stiffness, time, mass, decay, ratio };
double parse_quantity(std::string_view text, Dimension dim, const std::string& key, int line);

}  // namespace endosim
