#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "endosim/calibration.hpp"
#include "endosim/config.hpp"
#include "endosim/csv.hpp"
#include "endosim/engine.hpp"
#include "endosim/errors.hpp"
#include "endosim/units.hpp"

namespace {

using Clock = std::chrono::steady_clock;

struct Common {
  std::string config;
  std::string out;
  bool serial = false;
};

std::vector<double> parse_list(const std::string& text, endosim::Dimension dim, const std::string& unit,
                               const std::string& flag) {
  std::vector<double> out;
  for (const auto& part : endosim::csv::split(text)) {
    if (part.empty()) throw endosim::ConfigError(flag, 0, "empty list entry");
    out.push_back(endosim::parse_quantity(part + " " + unit, dim, flag, 0));
  }
  if (out.empty()) throw endosim::ConfigError(flag, 0, "list is empty");
  return out;
}

void write_output(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::fwrite(data.data(), 1, data.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw endosim::Error("cannot open `" + path + "` for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw endosim::Error("failed writing `" + path + "`");
}

std::size_t data_rows(const std::string& csv_text) {
  std::size_t n = 0;
  for (char c : csv_text) n += c == '\n';
  return n == 0 ? 0 : n - 1;
}

void finish(const char* command, const std::string& out, const std::string& data, Clock::time_point start) {
  write_output(out, data);
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  std::fprintf(stderr, "%s: %zu rows in %.3f s\n", command, data_rows(data), secs);
}

endosim::ScenarioConfig load(const Common& c) {
  endosim::ScenarioConfig sc = endosim::load_config(c.config);
  endosim::apply_calibration(sc);
  return sc;
}

std::string destination(const Common& c, const endosim::ScenarioConfig& sc) {
  return c.out.empty() ? sc.output : c.out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-static simulator for a worm-driven, bellows-expanded in-pipe robot"};
  app.require_subcommand(1);

  Common sim_opts;
  auto* sim = app.add_subcommand("simulate", "Run one scenario and write the step trace");
  sim->add_option("config", sim_opts.config, "Scenario file")->required();
  sim->add_option("--out", sim_opts.out, "CSV destination (default: run.output or stdout)");

  Common rpm_opts;
  std::string rpm_list;
  std::string surface_list;
  auto* sweep_rpm_cmd = app.add_subcommand("sweep-rpm", "Mean velocity and peak thrust per motor speed and surface");
  sweep_rpm_cmd->add_option("config", rpm_opts.config, "Scenario file")->required();
  sweep_rpm_cmd->add_option("--rpm", rpm_list, "Comma-separated motor speeds in RPM");
  sweep_rpm_cmd->add_option("--surfaces", surface_list, "Comma-separated surfaces");
  sweep_rpm_cmd->add_option("--out", rpm_opts.out, "CSV destination");
  sweep_rpm_cmd->add_flag("--serial", rpm_opts.serial, "Run the sweep on one thread");

  Common dia_opts;
  std::string mm_list;
  auto* sweep_dia_cmd = app.add_subcommand("sweep-diameter", "Bellows pressures and thrust per lumen diameter");
  sweep_dia_cmd->add_option("config", dia_opts.config, "Scenario file")->required();
  sweep_dia_cmd->add_option("--mm", mm_list, "Comma-separated lumen diameters in millimetres");
  sweep_dia_cmd->add_option("--out", dia_opts.out, "CSV destination");
  sweep_dia_cmd->add_flag("--serial", dia_opts.serial, "Run the sweep on one thread");

  Common cal_opts;
  std::string dataset_path;
  auto* cal = app.add_subcommand("calibrate", "Fit model parameters to the anchor dataset");
  cal->add_option("config", cal_opts.config, "Scenario file supplying the starting parameters");
  cal->add_option("--dataset", dataset_path, "Anchor CSV (default: built-in dataset)");
  cal->add_option("--out", cal_opts.out, "CSV destination");

  double preset_scale = 1.0;
  std::string preset_out;
  auto* presets = app.add_subcommand("presets", "Write the colon profile stations");
  presets->add_option("--scale", preset_scale, "Geometric scale factor")->check(CLI::PositiveNumber);
  presets->add_option("--out", preset_out, "CSV destination");

  CLI11_PARSE(app, argc, argv);

  const auto start = Clock::now();
  try {
    if (*sim) {
      const auto sc = load(sim_opts);
      finish("simulate", destination(sim_opts, sc), endosim::csv::trace(endosim::run(sc.engine)), start);
    } else if (*sweep_rpm_cmd) {
      std::vector<double> rpms;
      for (double w : rpm_list.empty() ? std::vector<double>{}
                                       : parse_list(rpm_list, endosim::Dimension::speed, "rpm", "--rpm"))
        rpms.push_back(endosim::units::rad_s_to_rpm(w));
      const auto sc = load(rpm_opts);
      if (rpms.empty()) rpms = sc.sweep_rpms;
      if (rpms.empty()) throw endosim::ConfigError("sweep.rpm", 0, "no speeds given in config or --rpm");
      std::vector<endosim::SurfaceKind> surfaces = sc.sweep_surfaces;
      if (!surface_list.empty()) {
        surfaces.clear();
        for (const auto& name : endosim::csv::split(surface_list)) {
          const auto kind = endosim::parse_surface(name);
          if (!kind) throw endosim::ConfigError("--surfaces", 0, "unknown surface `" + name + "`");
          surfaces.push_back(*kind);
        }
      }
      const auto rows = endosim::sweep_rpm(sc.engine, rpms, surfaces, {!rpm_opts.serial});
      finish("sweep-rpm", destination(rpm_opts, sc), endosim::csv::rpm_sweep(rows), start);
    } else if (*sweep_dia_cmd) {
      std::vector<double> diameters;
      if (!mm_list.empty()) diameters = parse_list(mm_list, endosim::Dimension::length, "mm", "--mm");
      const auto sc = load(dia_opts);
      if (diameters.empty()) diameters = sc.sweep_diameters;
      if (diameters.empty()) throw endosim::ConfigError("sweep.diameters", 0, "no diameters given in config or --mm");
      const auto rows = endosim::sweep_diameter(sc.engine, diameters, {!dia_opts.serial});
      finish("sweep-diameter", destination(dia_opts, sc), endosim::csv::diameter_sweep(rows), start);
    } else if (*cal) {
      endosim::ScenarioConfig sc;
      if (!cal_opts.config.empty()) sc = endosim::load_config(cal_opts.config);
      endosim::AnchorDataset dataset = endosim::builtin_anchor_dataset();
      if (!dataset_path.empty()) {
        std::ifstream in(dataset_path, std::ios::binary);
        if (!in) throw endosim::Error("cannot read dataset `" + dataset_path + "`");
        std::ostringstream buf;
        buf << in.rdbuf();
        dataset = endosim::AnchorDataset::parse_csv(buf.str());
      }
      const auto report = endosim::calibrate(sc.engine, dataset);
      finish("calibrate", destination(cal_opts, sc), report.to_csv(), start);
      if (!report.converged()) std::fprintf(stderr, "calibrate: warning: not every stage converged\n");
    } else if (*presets) {
      const auto profile = endosim::colon_preset(preset_scale);
      std::string data = "position_m,diameter_m,surface\n";
      for (const auto& s : profile.stations()) {
        data += endosim::csv::format_number(s.position * profile.scale()) + ',' +
                endosim::csv::format_number(s.diameter * profile.scale()) + ',' + std::string(s.surface.name()) + '\n';
      }
      finish("presets", preset_out, data, start);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
