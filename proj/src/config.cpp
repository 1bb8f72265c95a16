#include "endosim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <utility>

#include "endosim/calibration.hpp"
#include "endosim/csv.hpp"
#include "endosim/errors.hpp"
#include "endosim/units.hpp"
#include "quantity.hpp"

namespace endosim {
namespace {

struct UnitTable {
  std::string_view dimension;
  std::vector<std::pair<std::string_view, double>> units;
};

const UnitTable& table_for(Dimension dim) {
  static const std::map<Dimension, UnitTable> tables = {
      {Dimension::length, {"length", {{"mm", 1e-3}, {"cm", 1e-2}, {"m", 1.0}}}},
      {Dimension::pressure, {"pressure", {{"Pa", 1.0}, {"kPa", 1e3}, {"mbar", units::kMillibar}, {"bar", 1e5}}}},
      {Dimension::speed, {"rotational speed", {{"rpm", units::rpm_to_rad_s(1.0)}, {"rad/s", 1.0}}}},
      {Dimension::torque, {"torque", {{"N*m", 1.0}, {"Nm", 1.0}, {"mN*m", 1e-3}, {"mNm", 1e-3}}}},
      {Dimension::force, {"force", {{"N", 1.0}, {"mN", 1e-3}}}},
      {Dimension::stiffness, {"stiffness", {{"N/m", 1.0}, {"N/mm", 1e3}}}},
      {Dimension::time, {"time", {{"s", 1.0}, {"ms", 1e-3}}}},
      {Dimension::mass, {"mass", {{"kg", 1.0}, {"g", 1e-3}}}},
      {Dimension::decay, {"decay rate", {{"s/rad", 1.0}}}},
      {Dimension::ratio, {"dimensionless", {}}},
  };
  return tables.at(dim);
}

std::string unit_list(const UnitTable& t) {
  std::string out;
  for (const auto& [name, factor] : t.units) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

struct Entry {
  std::string key;
  std::string value;
  int line;
};

bool is_identifier(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  });
}

std::string strip_comment(std::string_view line) {
  const auto pos = line.find('#');
  return csv::trim(line.substr(0, pos));
}

// Splits one line into assignments. Later `key = value` parts on the same
// line inherit the first key's section prefix; parts without '=' extend the
// previous value as a comma list.
std::vector<Entry> split_assignments(const std::string& line, const std::string& section, int line_no) {
  std::vector<Entry> out;
  std::string prefix = section.empty() ? "" : section + ".";
  for (const auto& part : csv::split(line)) {
    const auto eq = part.find('=');
    const std::string lhs = eq == std::string::npos ? "" : csv::trim(std::string_view(part).substr(0, eq));
    if (eq != std::string::npos && is_identifier(lhs)) {
      std::string key = out.empty() ? prefix + lhs : prefix + lhs;
      if (out.empty()) {
        const auto dot = key.rfind('.');
        prefix = dot == std::string::npos ? "" : key.substr(0, dot + 1);
      }
      out.push_back({key, csv::trim(std::string_view(part).substr(eq + 1)), line_no});
    } else if (!out.empty()) {
      out.back().value += ", " + csv::trim(part);
    } else {
      throw ConfigError("", line_no, "expected `key = value`");
    }
  }
  for (const auto& e : out)
    if (e.value.empty()) throw ConfigError(e.key, line_no, "missing value");
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) { read(text); }

  ScenarioConfig build();

 private:
  void read(std::string_view text);

  std::optional<Entry> take(const std::string& key) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    Entry e = it->second;
    entries_.erase(it);
    return e;
  }

  void quantity(const std::string& key, Dimension dim, double& target,
                const std::function<bool(double)>& ok = nullptr, std::string_view rule = {}) {
    if (auto e = take(key)) {
      const double v = parse_quantity(e->value, dim, key, e->line);
      if (ok && !ok(v)) throw ConfigError(key, e->line, "value must be " + std::string(rule));
      target = v;
    }
  }
  void positive(const std::string& key, Dimension dim, double& target) {
    quantity(key, dim, target, [](double v) { return v > 0.0; }, "positive");
  }
  void non_negative(const std::string& key, Dimension dim, double& target) {
    quantity(key, dim, target, [](double v) { return v >= 0.0; }, "non-negative");
  }
  void fraction(const std::string& key, double& target) {
    quantity(key, Dimension::ratio, target, [](double v) { return v > 0.0 && v <= 1.0; }, "in (0, 1]");
  }
  void count(const std::string& key, int& target, int min_value) {
    if (auto e = take(key)) target = static_cast<int>(parse_count(*e, min_value));
  }
  static long long parse_count(const Entry& e, long long min_value) {
    long long v = 0;
    const auto res = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    if (res.ec != std::errc() || res.ptr != e.value.data() + e.value.size())
      throw ConfigError(e.key, e.line, "expected an integer, got `" + e.value + "`");
    if (v < min_value) throw ConfigError(e.key, e.line, "value must be at least " + std::to_string(min_value));
    return v;
  }
  static bool parse_bool(const Entry& e) {
    const std::string v = lower(e.value);
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ConfigError(e.key, e.line, "expected true or false, got `" + e.value + "`");
  }
  static SurfaceKind parse_surface_entry(const std::string& text, const std::string& key, int line) {
    const auto kind = parse_surface(csv::trim(text));
    if (!kind) throw ConfigError(key, line, "unknown surface `" + text + "`; expected smooth, tissue, foam or custom");
    return *kind;
  }

  template <typename F>
  static void checked(const std::string& key, int line, F&& f) {
    try {
      f();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(key, line, e.what());
    }
  }

  std::map<std::string, Entry> entries_;
  std::vector<Entry> stations_;
  std::map<std::string, int> sections_;
};

void Parser::read(std::string_view text) {
  std::string section;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string line = strip_comment(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("", line_no, "unterminated section header");
      section = csv::trim(std::string_view(line).substr(1, line.size() - 2));
      if (!is_identifier(section) || section.find('.') != std::string::npos)
        throw ConfigError(section, line_no, "invalid section name");
      sections_.emplace(section, line_no);
      continue;
    }
    // Station lists carry commas of their own.
    const auto eq = line.find('=');
    if (eq != std::string::npos) {
      const std::string lhs = csv::trim(std::string_view(line).substr(0, eq));
      const std::string full = section.empty() ? lhs : section + "." + lhs;
      if (full == "profile.station") {
        stations_.push_back({full, csv::trim(std::string_view(line).substr(eq + 1)), line_no});
        continue;
      }
    }
    for (auto& e : split_assignments(line, section, line_no)) {
      if (e.key == "profile.station") {
        stations_.push_back(std::move(e));
        continue;
      }
      const auto [it, inserted] = entries_.emplace(e.key, e);
      if (!inserted)
        throw ConfigError(e.key, e.line, "duplicate key (first set on line " + std::to_string(it->second.line) + ")");
    }
  }
}

ScenarioConfig Parser::build() {
  ScenarioConfig sc;
  EngineConfig& c = sc.engine;

  // Drive train.
  DriveTrainParams& dt = c.drivetrain;
  count("drivetrain.tracks", dt.tracks, 1);
  fraction("drivetrain.worm_friction", dt.worm_friction);
  positive("drivetrain.track_stiffness", Dimension::stiffness, dt.track_stiffness);
  positive("drivetrain.worm_diameter", Dimension::length, dt.worm_diameter);
  positive("drivetrain.pitch", Dimension::length, dt.pitch);
  count("drivetrain.worm_teeth", dt.worm_teeth, 1);
  count("drivetrain.track_teeth", dt.track_teeth, 1);
  non_negative("drivetrain.friction_torque", Dimension::torque, dt.friction_torque);
  positive("drivetrain.frame_width", Dimension::length, dt.frame_width);
  checked("drivetrain", sections_["drivetrain"], [&] { dt.validate(); });

  positive("motor.stall_torque", Dimension::torque, c.motor.stall_torque);
  positive("motor.no_load_speed", Dimension::speed, c.motor.no_load_speed);
  checked("motor", sections_["motor"], [&] { c.motor.validate(); });

  // Bellows: the range keys rebuild the curves, the rest adjust them.
  {
    BellowsAnchors a;
    a.effective_area = c.bellows.force.extrapolate(c.bellows.pressure_max) / c.bellows.pressure_max;
    const auto pmin_line = entries_.count("bellows.pressure_min") ? entries_.at("bellows.pressure_min").line : 0;
    quantity("bellows.pressure_min", Dimension::pressure, a.pressure_min, [](double v) { return v < 0.0; },
             "below ambient (negative gauge)");
    quantity("bellows.pressure_max", Dimension::pressure, a.pressure_max, [](double v) { return v > 0.0; },
             "above ambient (positive gauge)");
    double supply = 2.0 * a.pressure_max;
    quantity("bellows.supply_max", Dimension::pressure, supply,
             [&](double v) { return v >= a.pressure_max; }, "at least bellows.pressure_max");
    double gain = c.bellows.force_gain;
    positive("bellows.force_gain", Dimension::ratio, gain);
    checked("bellows", pmin_line, [&] {
      c.bellows = make_bellows(a);
      c.bellows.supply_max = supply;
      c.bellows.force_gain = gain;
      c.bellows.validate();
    });
  }

  positive("strut.length", Dimension::length, c.strut.length);
  positive("strut.base_offset", Dimension::length, c.strut.base_offset);
  quantity("strut.hub_radius", Dimension::length, c.strut.hub_radius);
  checked("strut", sections_["strut"], [&] { c.strut.validate(c.bellows); });

  // Surface catalog.
  for (SurfaceKind kind : {SurfaceKind::smooth, SurfaceKind::tissue, SurfaceKind::foam, SurfaceKind::custom}) {
    const std::string key = "surfaces." + std::string(to_string(kind)) + ".mu_c";
    quantity(key, Dimension::ratio, c.surfaces[kind].wall_friction, [](double v) { return v > 0.0; }, "positive");
  }

  // Slip.
  non_negative("slip.knee_speed", Dimension::speed, c.slip.knee_speed);
  non_negative("slip.decay", Dimension::decay, c.slip.decay);
  fraction("slip.eta_base", c.slip.eta_base);
  for (SurfaceKind kind : {SurfaceKind::smooth, SurfaceKind::tissue, SurfaceKind::foam, SurfaceKind::custom}) {
    double eta = 0.0;
    const std::string key = "slip.eta." + std::string(to_string(kind));
    if (entries_.count(key)) {
      fraction(key, eta);
      c.surface_efficiency[kind] = eta;
    }
  }
  checked("slip", sections_["slip"], [&] { c.slip.validate(); });

  // Resistance.
  non_negative("resistance.tether_drag", Dimension::force, c.resistance.tether_drag);
  double tip_mass = 0.0;
  non_negative("resistance.tip_mass", Dimension::mass, tip_mass);
  c.resistance.weight_load = tip_mass * units::kGravity / dt.tracks;

  // Run controls.
  {
    double omega = units::rpm_to_rad_s(c.rpm);
    non_negative("run.rpm", Dimension::speed, omega);
    c.rpm = units::rad_s_to_rpm(omega);
  }
  positive("run.dt", Dimension::time, c.run.dt);
  if (auto e = take("run.max_steps")) c.run.max_steps = static_cast<std::size_t>(parse_count(*e, 1));
  non_negative("run.stall_timeout", Dimension::time, c.run.stall_timeout);
  if (auto e = take("run.velocity_model")) {
    if (e->value == "gear") c.velocity_model = VelocityModel::gear;
    else if (e->value == "lead") c.velocity_model = VelocityModel::lead;
    else throw ConfigError(e->key, e->line, "expected gear or lead");
  }
  if (auto e = take("run.contact_bracket")) {
    if (e->value == "verbatim") c.bracket = ContactBracket::verbatim;
    else if (e->value == "half_difference") c.bracket = ContactBracket::half_difference;
    else throw ConfigError(e->key, e->line, "expected verbatim or half_difference");
  }
  if (auto e = take("run.output")) sc.output = e->value;

  // Profile: a preset, explicit stations, or a uniform pipe.
  {
    const auto preset = take("profile.preset");
    double scale = 1.0;
    const int scale_line = entries_.count("profile.scale") ? entries_.at("profile.scale").line : 0;
    positive("profile.scale", Dimension::ratio, scale);
    const auto length = take("profile.length");
    const auto diameter = take("profile.diameter");
    const auto surface = take("profile.surface");
    const SurfaceKind surface_kind =
        surface ? parse_surface_entry(surface->value, surface->key, surface->line) : SurfaceKind::smooth;

    if (preset && !stations_.empty())
      throw ConfigError("profile.station", stations_.front().line, "stations cannot be combined with a preset");
    if (preset && diameter) throw ConfigError("profile.diameter", diameter->line, "cannot be combined with a preset");
    if (!stations_.empty() && diameter)
      throw ConfigError("profile.diameter", diameter->line, "cannot be combined with stations");

    auto parse_length = [](const Entry& e) {
      const double v = parse_quantity(e.value, Dimension::length, e.key, e.line);
      if (v < 0.0) throw ConfigError(e.key, e.line, "length must be non-negative");
      return v;
    };

    if (preset) {
      if (preset->value != "colon") throw ConfigError("profile.preset", preset->line, "unknown preset `" + preset->value + "`");
      if (length) throw ConfigError("profile.length", length->line, "preset profiles have a fixed length");
      c.profile = colon_preset(scale);
      if (surface) c.profile = c.profile.with_surface(default_surface(surface_kind));
    } else if (!stations_.empty()) {
      if (!length) throw ConfigError("profile.length", stations_.front().line, "station profiles need a length");
      std::vector<Station> stations;
      for (const auto& e : stations_) {
        const auto parts = csv::split(e.value);
        if (parts.size() != 3)
          throw ConfigError(e.key, e.line, "expected `position, diameter, surface`");
        const double pos = parse_quantity(parts[0], Dimension::length, e.key, e.line);
        const double d = parse_quantity(parts[1], Dimension::length, e.key, e.line);
        if (pos < 0.0) throw ConfigError(e.key, e.line, "position must be non-negative");
        if (d <= 0.0) throw ConfigError(e.key, e.line, "diameter must be positive");
        stations.push_back({pos, d, default_surface(parse_surface_entry(parts[2], e.key, e.line))});
      }
      const double len = parse_length(*length);
      checked("profile.station", stations_.front().line, [&] { c.profile = PipeProfile(stations, len, scale); });
    } else if (diameter || length || surface || scale_line) {
      double d = c.drivetrain.frame_width;
      if (diameter) {
        d = parse_quantity(diameter->value, Dimension::length, diameter->key, diameter->line);
        if (d <= 0.0) throw ConfigError(diameter->key, diameter->line, "diameter must be positive");
      }
      const double len = length ? parse_length(*length) : c.profile.length();
      const SurfaceSpec s = default_surface(surface_kind);
      c.profile = PipeProfile({{0.0, d, s}}, len, scale);
    }
  }

  // Sweep lists.
  if (auto e = take("sweep.rpm")) {
    for (const auto& part : csv::split(e->value))
      sc.sweep_rpms.push_back(units::rad_s_to_rpm(parse_quantity(part, Dimension::speed, e->key, e->line)));
  }
  if (auto e = take("sweep.diameters")) {
    for (const auto& part : csv::split(e->value)) {
      const double d = parse_quantity(part, Dimension::length, e->key, e->line);
      if (d <= 0.0) throw ConfigError(e->key, e->line, "diameters must be positive");
      sc.sweep_diameters.push_back(d);
    }
  }
  if (auto e = take("sweep.surfaces")) {
    sc.sweep_surfaces.clear();
    for (const auto& part : csv::split(e->value)) sc.sweep_surfaces.push_back(parse_surface_entry(part, e->key, e->line));
  }

  if (auto e = take("calibration.calibrated")) {
    if (parse_bool(*e)) sc.calibration = CalibrationSource::builtin;
  }
  if (auto e = take("calibration.file")) {
    sc.calibration = CalibrationSource::file;
    sc.calibration_file = e->value;
  }

  if (!entries_.empty()) {
    const auto first = std::min_element(entries_.begin(), entries_.end(),
                                        [](const auto& a, const auto& b) { return a.second.line < b.second.line; });
    throw ConfigError(first->first, first->second.line, "unknown key");
  }

  checked("", 0, [&] { c.validate(); });
  return sc;
}

}  // namespace

double parse_quantity(std::string_view text, Dimension dim, const std::string& key, int line) {
  const UnitTable& t = table_for(dim);
  const auto parsed = detail::parse_number_with_unit(text);
  if (!parsed) throw ConfigError(key, line, "expected a number, got `" + std::string(text) + "`");
  if (!std::isfinite(parsed->value)) throw ConfigError(key, line, "value must be finite");
  if (dim == Dimension::ratio) {
    if (!parsed->unit.empty()) throw ConfigError(key, line, "unit `" + parsed->unit + "` given for a dimensionless value");
    return parsed->value;
  }
  if (parsed->unit.empty())
    throw ConfigError(key, line, "missing unit; expected " + std::string(t.dimension) + " in " + unit_list(t));
  for (const auto& [name, factor] : t.units)
    if (lower(name) == lower(parsed->unit)) return parsed->value * factor;
  throw ConfigError(key, line,
                    "unit `" + parsed->unit + "` is not a " + std::string(t.dimension) + " unit; expected " + unit_list(t));
}

ScenarioConfig parse_config(std::string_view text) { return Parser(text).build(); }

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read config `" + path.string() + "`");
  std::ostringstream buf;
  buf << in.rdbuf();
  ScenarioConfig sc = parse_config(buf.str());
  if (sc.calibration == CalibrationSource::file) {
    const std::filesystem::path file(sc.calibration_file);
    if (file.is_relative()) sc.calibration_file = (path.parent_path() / file).string();
  }
  return sc;
}

void apply_calibration(ScenarioConfig& scenario) {
  switch (scenario.calibration) {
    case CalibrationSource::none:
      return;
    case CalibrationSource::builtin: {
      const PipeProfile profile = scenario.engine.profile;
      const double rpm = scenario.engine.rpm;
      const RunControls controls = scenario.engine.run;
      scenario.engine = calibrate(scenario.engine).config;
      scenario.engine.profile = profile;
      scenario.engine.rpm = rpm;
      scenario.engine.run = controls;
      return;
    }
    case CalibrationSource::file: {
      std::ifstream in(scenario.calibration_file, std::ios::binary);
      if (!in) throw Error("cannot read calibration file `" + scenario.calibration_file + "`");
      std::ostringstream buf;
      buf << in.rdbuf();
      apply_calibration_csv(scenario.engine, buf.str());
      return;
    }
  }
}

}  // namespace endosim
