#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "endosim/engine.hpp"
#include "endosim/simplex.hpp"

namespace endosim {

/// One measured value with its conditions and source location.
///
/// `condition` is either a bare tag or `key=value` pairs joined by `;`.
struct AnchorRecord {
  std::string quantity;
  std::string condition;
  double value = 0.0;
  std::string unit;
  std::string citation;
  double si_value = 0.0;

  /// Value of `key` inside the condition, if present.
  std::optional<std::string> condition_value(std::string_view key) const;
};

/// Converts a dataset value to SI. Throws OutOfRange for unknown units.
double anchor_to_si(double value, std::string_view unit);

/// Append-only list of anchors. CSV header:
/// quantity,condition,value,unit,citation
class AnchorDataset {
 public:
  static AnchorDataset parse_csv(std::string_view text);
  std::string to_csv() const;

  /// Throws ConfigError when the citation is empty.
  void append(AnchorRecord record);

  std::span<const AnchorRecord> records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  AnchorDataset select(std::initializer_list<std::string_view> quantities) const;
  std::optional<double> find(std::string_view quantity, std::string_view condition) const;
  std::vector<double> values(std::string_view quantity) const;

 private:
  std::vector<AnchorRecord> records_;
};

AnchorDataset builtin_anchor_dataset();

/// Bellows curves built from the dataset maxima plus any digitized
/// `bellows_axial` / `bellows_height` / `bellows_width` / `bellows_force`
/// points (condition `pressure=<value> <unit>`).
BellowsModel bellows_from_dataset(const AnchorDataset& dataset, const BellowsModel& base = default_bellows());

/// Named access to every fittable parameter plus a simulator for each
/// anchor quantity.
///
/// Parameter names: track_stiffness, wall_friction.<surface>,
/// eta_base, eta_base.<surface>, slip.knee_speed, slip.decay,
/// strut.length, strut.base_offset, strut.hub_radius, bellows.force_gain.
class CalibrationModel {
 public:
  explicit CalibrationModel(EngineConfig config, std::vector<double> rpm_grid = {75, 120, 150, 200, 300});

  static std::vector<std::string> parameter_names();
  double get(std::string_view name) const;
  void set(std::string_view name, double value);

  /// Model counterpart of an anchor, in SI.
  double simulate(const AnchorRecord& record) const;
  /// Residual scale for an anchor: 5% for speeds, 10% for forces, 1 mm for
  /// diameters, 20% for the peak-speed band, 1% otherwise.
  double tolerance(const AnchorRecord& record) const;

  const EngineConfig& config() const { return config_; }
  std::span<const double> rpm_grid() const { return rpm_grid_; }
  /// Uniform pipe at the frame width used for speed and force anchors.
  EngineConfig anchor_scenario(SurfaceKind surface, double rpm) const;

 private:
  EngineConfig config_;
  std::vector<double> rpm_grid_;
};

struct ParameterBound {
  double lower;
  double upper;
};

struct AnchorResidual {
  std::string quantity;
  std::string condition;
  double target;
  double simulated;
  double scaled;
};

struct FitResult {
  std::vector<std::string> names;
  std::vector<double> values;
  double rss = 0.0;
  std::vector<AnchorResidual> residuals;
  bool converged = false;
  int iterations = 0;
  int evaluations = 0;
};

struct FitOptions {
  SimplexOptions simplex;
  /// Converged requires rss <= threshold; negative means one per anchor.
  double rss_threshold = -1.0;
};

/// Bounded simplex least squares over tolerance-scaled residuals. Leaves
/// the fitted values applied to `model`. Non-convergence is reported in the
/// result, not thrown.
FitResult fit(std::span<const std::string> names, const AnchorDataset& dataset, std::span<const double> initial,
              std::span<const ParameterBound> bounds, CalibrationModel& model, const FitOptions& options = {});

/// Residuals of `dataset` under the model's current parameters.
FitResult evaluate(const AnchorDataset& dataset, const CalibrationModel& model);

struct CalibrationStage {
  std::string name;
  FitResult result;
};

struct CalibrationReport {
  std::vector<CalibrationStage> stages;
  EngineConfig config;

  bool converged() const;
  /// stage,kind,name,value rows; kind is param, rss, converged or residual.
  std::string to_csv() const;
};

/// Full staged fit: strut geometry, force scale, slip knee, per-surface
/// efficiency from speeds, then stiffness and friction from the force
/// maxima.
CalibrationReport calibrate(const EngineConfig& base, const AnchorDataset& dataset = builtin_anchor_dataset());

/// Applies `param` rows of a CSV written by CalibrationReport::to_csv.
void apply_calibration_csv(EngineConfig& config, std::string_view text);

}  // namespace endosim
