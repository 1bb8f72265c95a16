#include "endosim/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <cctype>
#include <numbers>

#include "endosim/anchors_data.hpp"
#include "endosim/csv.hpp"
#include "endosim/errors.hpp"
#include "endosim/units.hpp"
#include "quantity.hpp"

namespace endosim {
namespace {

constexpr double kPenalty = 1e12;

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

SurfaceKind surface_from(const AnchorRecord& r) {
  const auto name = r.condition_value("surface");
  if (!name) throw InvalidParams("anchor " + r.quantity + " has no surface condition");
  const auto kind = parse_surface(*name);
  if (!kind) throw InvalidParams("unknown surface `" + *name + "`");
  return *kind;
}

double condition_si(const AnchorRecord& r, std::string_view key) {
  const auto text = r.condition_value(key);
  if (!text) throw InvalidParams("anchor " + r.quantity + " lacks condition `" + std::string(key) + "`");
  const auto parsed = detail::parse_number_with_unit(*text);
  if (!parsed) throw InvalidParams("anchor condition `" + *text + "` is not a number");
  return anchor_to_si(parsed->value, parsed->unit);
}

}  // namespace

std::optional<std::string> AnchorRecord::condition_value(std::string_view key) const {
  for (const auto& part : csv::split(condition, ';')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) continue;
    if (csv::trim(part.substr(0, eq)) == key) return csv::trim(part.substr(eq + 1));
  }
  return std::nullopt;
}

double anchor_to_si(double value, std::string_view unit) {
  static const std::map<std::string, double, std::less<>> scale = {
      {"", 1.0},        {"-", 1.0},      {"pa", 1.0},         {"kpa", 1e3},   {"mbar", units::kMillibar},
      {"m", 1.0},       {"cm", 1e-2},    {"mm", 1e-3},        {"n", 1.0},     {"m/s", 1.0},
      {"mm/s", 1e-3},   {"rad/s", 1.0},  {"rpm", 2.0 * std::numbers::pi / 60.0},
      {"%", 0.01},
  };
  const auto it = scale.find(lower(unit));
  if (it == scale.end()) throw OutOfRange("unknown dataset unit `" + std::string(unit) + "`");
  return value * it->second;
}

AnchorDataset AnchorDataset::parse_csv(std::string_view text) {
  AnchorDataset ds;
  int line_no = 0;
  bool header_seen = false;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string line = csv::trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto fields = csv::split(line);
    if (!header_seen) {
      if (fields != std::vector<std::string>{"quantity", "condition", "value", "unit", "citation"})
        throw ConfigError("", line_no, "dataset header must be quantity,condition,value,unit,citation");
      header_seen = true;
      continue;
    }
    if (fields.size() != 5) throw ConfigError("", line_no, "dataset rows need exactly five fields");
    AnchorRecord r;
    r.quantity = fields[0];
    r.condition = fields[1];
    const auto parsed = detail::parse_number_with_unit(fields[2]);
    if (!parsed || !parsed->unit.empty()) throw ConfigError(r.quantity, line_no, "value is not a number");
    r.value = parsed->value;
    r.unit = fields[3];
    r.citation = fields[4];
    try {
      r.si_value = anchor_to_si(r.value, r.unit);
    } catch (const OutOfRange& e) {
      throw ConfigError(r.quantity, line_no, e.what());
    }
    if (r.citation.empty()) throw ConfigError(r.quantity, line_no, "record carries no citation");
    ds.records_.push_back(std::move(r));
  }
  if (!header_seen) throw ConfigError("", 0, "dataset is empty");
  return ds;
}

std::string AnchorDataset::to_csv() const {
  std::string out = "quantity,condition,value,unit,citation\n";
  for (const auto& r : records_)
    out += r.quantity + ',' + r.condition + ',' + csv::format_exact(r.value) + ',' + r.unit + ',' + r.citation + '\n';
  return out;
}

void AnchorDataset::append(AnchorRecord record) {
  if (record.citation.empty()) throw ConfigError(record.quantity, 0, "record carries no citation");
  record.si_value = anchor_to_si(record.value, record.unit);
  records_.push_back(std::move(record));
}

AnchorDataset AnchorDataset::select(std::initializer_list<std::string_view> quantities) const {
  AnchorDataset out;
  for (const auto& r : records_)
    if (std::find(quantities.begin(), quantities.end(), r.quantity) != quantities.end()) out.records_.push_back(r);
  return out;
}

std::optional<double> AnchorDataset::find(std::string_view quantity, std::string_view condition) const {
  for (const auto& r : records_)
    if (r.quantity == quantity && r.condition == condition) return r.si_value;
  return std::nullopt;
}

std::vector<double> AnchorDataset::values(std::string_view quantity) const {
  std::vector<double> out;
  for (const auto& r : records_)
    if (r.quantity == quantity) out.push_back(r.si_value);
  return out;
}

AnchorDataset builtin_anchor_dataset() { return AnchorDataset::parse_csv(detail::kBuiltinAnchorsCsv); }

BellowsModel bellows_from_dataset(const AnchorDataset& dataset, const BellowsModel& base) {
  BellowsAnchors a;
  if (auto v = dataset.find("pressure_min", "bellows")) a.pressure_min = *v;
  if (auto v = dataset.find("pressure_max", "bellows")) a.pressure_max = *v;
  if (auto v = dataset.find("displacement_max", "axis=axial")) a.axial_max = *v;
  if (auto v = dataset.find("displacement_max", "axis=height")) a.height_max = *v;
  if (auto v = dataset.find("displacement_max", "axis=width")) a.width_max = *v;
  a.effective_area = base.force.extrapolate(base.pressure_max) / base.pressure_max;
  BellowsModel m = make_bellows(a);
  m.force_gain = base.force_gain;
  m.supply_max = std::max(base.supply_max, m.pressure_max);

  for (const auto& r : dataset.records()) {
    PiecewiseLinear* curve = nullptr;
    if (r.quantity == "bellows_axial") curve = &m.axial;
    if (r.quantity == "bellows_height") curve = &m.height;
    if (r.quantity == "bellows_width") curve = &m.width;
    if (r.quantity == "bellows_force") curve = &m.force;
    if (!curve) continue;
    curve->insert({condition_si(r, "pressure"), r.si_value});
  }
  m.validate();
  return m;
}

CalibrationModel::CalibrationModel(EngineConfig config, std::vector<double> rpm_grid)
    : config_(std::move(config)), rpm_grid_(std::move(rpm_grid)) {
  if (rpm_grid_.empty()) throw InvalidParams("calibration rpm grid is empty");
}

std::vector<std::string> CalibrationModel::parameter_names() {
  return {"track_stiffness",       "wall_friction.smooth", "wall_friction.tissue", "wall_friction.foam",
          "wall_friction.custom",  "eta_base",             "eta_base.smooth",      "eta_base.tissue",
          "eta_base.foam",         "eta_base.custom",      "slip.knee_speed",      "slip.decay",
          "strut.length",          "strut.base_offset",    "strut.hub_radius",     "bellows.force_gain"};
}

namespace {

std::optional<SurfaceKind> suffix_surface(std::string_view name, std::string_view prefix) {
  if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
  const auto kind = parse_surface(name.substr(prefix.size()));
  if (!kind) throw InvalidParams("unknown surface in parameter `" + std::string(name) + "`");
  return kind;
}

}  // namespace

double CalibrationModel::get(std::string_view name) const {
  const EngineConfig& c = config_;
  if (name == "track_stiffness") return c.drivetrain.track_stiffness;
  if (name == "eta_base") return c.slip.eta_base;
  if (name == "slip.knee_speed") return c.slip.knee_speed;
  if (name == "slip.decay") return c.slip.decay;
  if (name == "strut.length") return c.strut.length;
  if (name == "strut.base_offset") return c.strut.base_offset;
  if (name == "strut.hub_radius") return c.strut.hub_radius;
  if (name == "bellows.force_gain") return c.bellows.force_gain;
  if (auto k = suffix_surface(name, "wall_friction.")) return c.resolve(default_surface(*k)).wall_friction;
  if (auto k = suffix_surface(name, "eta_base.")) return c.slip_for(*k).eta_base;
  throw InvalidParams("unknown parameter `" + std::string(name) + "`");
}

void CalibrationModel::set(std::string_view name, double value) {
  EngineConfig& c = config_;
  if (name == "track_stiffness") {
    c.drivetrain.track_stiffness = value;
  } else if (name == "eta_base") {
    c.slip.eta_base = value;
  } else if (name == "slip.knee_speed") {
    c.slip.knee_speed = value;
  } else if (name == "slip.decay") {
    c.slip.decay = value;
  } else if (name == "strut.length") {
    c.strut.length = value;
  } else if (name == "strut.base_offset") {
    c.strut.base_offset = value;
  } else if (name == "strut.hub_radius") {
    c.strut.hub_radius = value;
  } else if (name == "bellows.force_gain") {
    c.bellows.force_gain = value;
  } else if (auto k = suffix_surface(name, "wall_friction.")) {
    SurfaceSpec s = c.resolve(default_surface(*k));
    s.wall_friction = value;
    c.surfaces[*k] = s;
  } else if (auto k = suffix_surface(name, "eta_base.")) {
    c.surface_efficiency[*k] = value;
  } else {
    throw InvalidParams("unknown parameter `" + std::string(name) + "`");
  }
}

EngineConfig CalibrationModel::anchor_scenario(SurfaceKind surface, double rpm) const {
  EngineConfig c = config_;
  c.profile = uniform_pipe(c.drivetrain.frame_width, 0.1, c.resolve(default_surface(surface)));
  c.rpm = rpm;
  c.run.dt = 0.05;
  c.run.max_steps = 200;
  c.run.stall_timeout = 0.1;
  return c;
}

double CalibrationModel::simulate(const AnchorRecord& r) const {
  const EngineConfig& c = config_;
  const std::string& q = r.quantity;
  if (q == "tip_diameter") return tip_diameter(condition_si(r, "pressure"), c.strut, c.bellows);
  if (q == "expansion_ratio") {
    const DiameterRange range = diameter_range(c.strut, c.bellows);
    return (range.max - range.min) / range.min;
  }
  if (q == "pressure_min") return c.bellows.pressure_min;
  if (q == "pressure_max") return c.bellows.pressure_max;
  if (q == "displacement_max") {
    const auto axis = r.condition_value("axis");
    const BellowsDisplacement d = bellows_displacement(c.bellows.pressure_max, c.bellows);
    if (axis == "axial") return d.axial;
    if (axis == "height") return d.height;
    if (axis == "width") return d.width;
    throw InvalidParams("displacement anchor needs axis=axial|height|width");
  }
  if (q == "normal_force_peak") return peak_normal_force(c.strut, c.bellows);
  if (q == "force_peak_rpm") return c.slip.knee_speed;
  if (q == "speed") {
    const auto parsed = detail::parse_number_with_unit(r.condition_value("rpm").value_or(""));
    if (!parsed || !(parsed->unit.empty() || lower(parsed->unit) == "rpm"))
      throw InvalidParams("speed anchor needs an rpm=<value> condition");
    const double rpm = parsed->value;
    const auto trace = run(anchor_scenario(surface_from(r), rpm));
    return mean_velocity(trace);
  }
  if (q == "force_peak") {
    const SurfaceKind kind = surface_from(r);
    double best = 0.0;
    for (double rpm : rpm_grid_) best = std::max(best, peak_thrust(run(anchor_scenario(kind, rpm))));
    return best;
  }
  throw InvalidParams("no model counterpart for anchor quantity `" + q + "`");
}

double CalibrationModel::tolerance(const AnchorRecord& r) const {
  const std::string& q = r.quantity;
  const double mag = std::max(std::abs(r.si_value), 1e-12);
  if (q == "speed") return 0.05 * mag;
  if (q == "force_peak" || q == "normal_force_peak") return 0.10 * mag;
  if (q == "tip_diameter") return 1e-3;
  if (q == "force_peak_rpm") return 0.20 * mag;
  return 0.01 * mag;
}

namespace {

FitResult residuals_of(const AnchorDataset& dataset, const CalibrationModel& model) {
  FitResult out;
  for (const auto& r : dataset.records()) {
    const double sim = model.simulate(r);
    const double scaled = (sim - r.si_value) / model.tolerance(r);
    out.residuals.push_back({r.quantity, r.condition, r.si_value, sim, scaled});
    out.rss += scaled * scaled;
  }
  return out;
}

double threshold_for(const FitOptions& options, const AnchorDataset& dataset) {
  return options.rss_threshold >= 0.0 ? options.rss_threshold : static_cast<double>(dataset.size());
}

}  // namespace

FitResult evaluate(const AnchorDataset& dataset, const CalibrationModel& model) {
  FitResult out = residuals_of(dataset, model);
  out.converged = out.rss <= static_cast<double>(dataset.size());
  return out;
}

FitResult fit(std::span<const std::string> names, const AnchorDataset& dataset, std::span<const double> initial,
              std::span<const ParameterBound> bounds, CalibrationModel& model, const FitOptions& options) {
  if (names.size() > 4) throw InvalidParams("fit accepts at most four parameters");
  if (initial.size() != names.size() || bounds.size() != names.size())
    throw InvalidParams("names, initial guesses and bounds must have equal length");
  std::vector<double> lo, hi;
  for (const auto& b : bounds) {
    if (!std::isfinite(b.lower) || !std::isfinite(b.upper) || !(b.lower < b.upper))
      throw InvalidParams("infeasible parameter bounds");
    lo.push_back(b.lower);
    hi.push_back(b.upper);
  }
  for (const auto& n : names) (void)model.get(n);

  auto objective = [&](std::span<const double> x) {
    CalibrationModel trial = model;
    try {
      for (std::size_t i = 0; i < names.size(); ++i) trial.set(names[i], x[i]);
      trial.config().validate();
      return residuals_of(dataset, trial).rss;
    } catch (const Error&) {
      return kPenalty;
    }
  };

  const SimplexResult s = minimize_bounded(objective, initial, lo, hi, options.simplex);
  for (std::size_t i = 0; i < names.size(); ++i) model.set(names[i], s.x[i]);

  FitResult out = residuals_of(dataset, model);
  out.names.assign(names.begin(), names.end());
  out.values = s.x;
  out.iterations = s.iterations;
  out.evaluations = s.evaluations;
  out.converged = s.converged && out.rss <= threshold_for(options, dataset);
  return out;
}

bool CalibrationReport::converged() const {
  return std::all_of(stages.begin(), stages.end(), [](const CalibrationStage& s) { return s.result.converged; });
}

std::string CalibrationReport::to_csv() const {
  std::string out = "stage,kind,name,value\n";
  for (const auto& st : stages) {
    const FitResult& r = st.result;
    for (std::size_t i = 0; i < r.names.size(); ++i)
      out += st.name + ",param," + r.names[i] + ',' + csv::format_exact(r.values[i]) + '\n';
    out += st.name + ",rss,," + csv::format_number(r.rss) + '\n';
    out += st.name + ",converged,," + std::string(r.converged ? "1" : "0") + '\n';
    for (const auto& res : r.residuals) {
      std::string label = res.quantity;
      if (!res.condition.empty()) label += '[' + res.condition + ']';
      out += st.name + ",residual," + label + ',' + csv::format_number(res.scaled) + '\n';
    }
  }
  return out;
}

namespace {

CalibrationStage run_stage(std::string name, std::vector<std::string> params, std::vector<ParameterBound> bounds,
                           const AnchorDataset& anchors, CalibrationModel& model) {
  std::vector<double> initial;
  for (std::size_t i = 0; i < params.size(); ++i)
    initial.push_back(std::clamp(model.get(params[i]), bounds[i].lower, bounds[i].upper));
  return {std::move(name), fit(params, anchors, initial, bounds, model)};
}

}  // namespace

CalibrationReport calibrate(const EngineConfig& base, const AnchorDataset& dataset) {
  EngineConfig start = base;
  start.bellows = bellows_from_dataset(dataset, base.bellows);

  std::vector<double> grid;
  for (double omega : dataset.values("test_rpm")) grid.push_back(units::rad_s_to_rpm(omega));
  if (grid.empty()) grid = {75, 120, 150, 200, 300};
  CalibrationModel model(start, grid);
  CalibrationReport report;

  // Strut geometry against the three diameter anchors, then close the rest
  // diameter exactly so ambient pressure maps to it without round-off.
  report.stages.push_back(run_stage("geometry", {"strut.length", "strut.base_offset", "strut.hub_radius"},
                                    {{0.02, 0.5}, {1e-3, 0.5}, {-0.1, 0.1}}, dataset.select({"tip_diameter"}),
                                    model));
  if (auto rest = dataset.find("tip_diameter", "pressure=0 mbar")) {
    const double l = model.get("strut.length");
    const double a0 = model.get("strut.base_offset");
    model.set("strut.hub_radius", 0.5 * *rest - std::sqrt(l * l - a0 * a0));
    FitResult& geometry = report.stages.back().result;
    const FitResult closed = evaluate(dataset.select({"tip_diameter"}), model);
    geometry.values.back() = model.get("strut.hub_radius");
    geometry.residuals = closed.residuals;
    geometry.rss = closed.rss;
    geometry.converged = geometry.converged && closed.converged;
  }

  report.stages.push_back(
      run_stage("force_scale", {"bellows.force_gain"}, {{1e-3, 1e3}}, dataset.select({"normal_force_peak"}), model));

  const double max_speed = model.config().motor.no_load_speed;
  report.stages.push_back(
      run_stage("slip_knee", {"slip.knee_speed"}, {{0.0, max_speed}}, dataset.select({"force_peak_rpm"}), model));

  report.stages.push_back(run_stage("speed", {"eta_base.smooth", "eta_base.tissue"}, {{1e-3, 1.0}, {1e-3, 1.0}},
                                    dataset.select({"speed"}), model));
  // Surfaces without a speed anchor share the mean efficiency.
  model.set("eta_base", 0.5 * (model.get("eta_base.smooth") + model.get("eta_base.tissue")));

  // Only the stiffness-friction product is observable; smooth friction
  // stays at its catalog value as the reference.
  report.stages.push_back(run_stage("traction", {"track_stiffness", "wall_friction.tissue", "wall_friction.foam"},
                                    {{0.1, 1e4}, {1e-3, 3.0}, {1e-3, 3.0}}, dataset.select({"force_peak"}), model));

  report.config = model.config();
  CalibrationStage shared{"shared", {}};
  shared.result.names = {"eta_base"};
  shared.result.values = {report.config.slip.eta_base};
  shared.result.converged = true;
  report.stages.push_back(std::move(shared));
  return report;
}

void apply_calibration_csv(EngineConfig& config, std::string_view text) {
  CalibrationModel model(config);
  int line_no = 0;
  std::size_t start = 0;
  bool header_seen = false;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string line = csv::trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto f = csv::split(line);
    if (!header_seen) {
      if (f != std::vector<std::string>{"stage", "kind", "name", "value"})
        throw ConfigError("", line_no, "calibration header must be stage,kind,name,value");
      header_seen = true;
      continue;
    }
    if (f.size() != 4) throw ConfigError("", line_no, "calibration rows need four fields");
    if (f[1] != "param") continue;
    const auto v = detail::parse_number_with_unit(f[3]);
    if (!v || !v->unit.empty()) throw ConfigError(f[2], line_no, "value is not a number");
    try {
      model.set(f[2], v->value);
    } catch (const InvalidParams& e) {
      throw ConfigError(f[2], line_no, e.what());
    }
  }
  if (!header_seen) throw ConfigError("", 0, "calibration file is empty");
  config = model.config();
}

}  // namespace endosim
