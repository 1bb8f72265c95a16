#include <doctest.h>

#include <string>

#include "endosim/config.hpp"
#include "endosim/errors.hpp"
#include "endosim/units.hpp"

using namespace endosim;

namespace {

// Returns the ConfigError raised by parsing `text`.
ConfigError parse_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a ConfigError");
  return ConfigError("", 0, "");
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("empty drive-train section keeps the prototype defaults") {
    const auto sc = parse_config("[drivetrain]\n");
    const auto& d = sc.engine.drivetrain;
    CHECK(d.pitch == doctest::Approx(3e-3));
    CHECK(d.worm_diameter == doctest::Approx(28e-3));
    CHECK(d.worm_teeth == 5);
    CHECK(d.track_teeth == 34);
    CHECK(d.frame_width == doctest::Approx(0.140));
    CHECK(sc.calibration == CalibrationSource::none);
  }

  TEST_CASE("units are converted on ingestion") {
    const auto sc = parse_config(
        "[drivetrain]\npitch = 0.3 cm\nworm_diameter = 28mm\ntrack_stiffness = 0.05 N/mm\nfriction_torque = 5 mN*m\n"
        "[bellows]\npressure_min = -101 mbar\npressure_max = 28.3 kPa\n"
        "[run]\nrpm = 31.4159265358979 rad/s\ndt = 20 ms\n"
        "[resistance]\ntip_mass = 120 g\ntether_drag = 10 mN\n");
    const auto& e = sc.engine;
    CHECK(e.drivetrain.pitch == doctest::Approx(3e-3));
    CHECK(e.drivetrain.worm_diameter == doctest::Approx(28e-3));
    CHECK(e.drivetrain.track_stiffness == doctest::Approx(50.0));
    CHECK(e.drivetrain.friction_torque == doctest::Approx(5e-3));
    CHECK(e.bellows.pressure_min == doctest::Approx(-10100.0));
    CHECK(e.bellows.pressure_max == doctest::Approx(28300.0));
    CHECK(e.rpm == doctest::Approx(300.0));
    CHECK(e.run.dt == doctest::Approx(0.02));
    CHECK(e.resistance.weight_load == doctest::Approx(0.12 * units::kGravity / 4));
    CHECK(e.resistance.tether_drag == doctest::Approx(0.01));
  }

  TEST_CASE("negative length names the key") {
    const auto e = parse_error("[drivetrain]\npitch = -1mm\n");
    CHECK(e.key() == "drivetrain.pitch");
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("pitch") != std::string::npos);
  }

  TEST_CASE("malformed and missing units name the key") {
    auto e = parse_error("[drivetrain]\nworm_diameter = 28 furlongs\n");
    CHECK(e.key() == "drivetrain.worm_diameter");
    CHECK(e.line() == 2);
    e = parse_error("[run]\nrpm = 300\n");
    CHECK(e.key() == "run.rpm");
    CHECK(std::string(e.what()).find("missing unit") != std::string::npos);
    e = parse_error("[run]\nrpm = 300 mm\n");
    CHECK(e.key() == "run.rpm");
    e = parse_error("[drivetrain]\nworm_friction = 0.1 N\n");
    CHECK(e.key() == "drivetrain.worm_friction");
    e = parse_error("[drivetrain]\ntracks = 2.5\n");
    CHECK(e.key() == "drivetrain.tracks");
  }

  TEST_CASE("unknown, duplicate and malformed lines") {
    auto e = parse_error("[drivetrain]\n\n# comment\npich = 3 mm\n");
    CHECK(e.key() == "drivetrain.pich");
    CHECK(e.line() == 4);
    e = parse_error("[run]\ndt = 1 ms\ndt = 2 ms\n");
    CHECK(e.key() == "run.dt");
    CHECK(e.line() == 3);
    e = parse_error("[run\n");
    CHECK(e.line() == 1);
    e = parse_error("just words\n");
    CHECK(e.line() == 1);
    e = parse_error("[run]\nvelocity_model = teleport\n");
    CHECK(e.key() == "run.velocity_model");
  }

  TEST_CASE("invariants spanning several keys are reported") {
    auto e = parse_error("[strut]\nlength = 150 mm\n");
    CHECK(e.key() == "strut");
    CHECK(e.line() == 1);
    e = parse_error("[run]\nrpm = 900 rpm\n");
    CHECK(std::string(e.what()).find("no-load") != std::string::npos);
  }

  TEST_CASE("colon preset with scale on one line") {
    const auto sc = parse_config("profile.preset = colon, scale = 4\n");
    const auto& p = sc.engine.profile;
    CHECK(p.stations().size() == 6);
    CHECK(p.scale() == 4.0);
    CHECK(p.max_diameter() == doctest::Approx(0.180));
    CHECK(p.length() == doctest::Approx(6.0));
  }

  TEST_CASE("inline stations and uniform pipes") {
    const auto sc = parse_config(
        "[profile]\nstation = 0 mm, 120 mm, smooth\nstation = 0.5 m, 140 mm, foam\nlength = 1 m\n");
    const auto& p = sc.engine.profile;
    REQUIRE(p.stations().size() == 2);
    CHECK(p.stations()[1].surface.kind == SurfaceKind::foam);
    CHECK(p.stations()[1].diameter == doctest::Approx(0.14));

    const auto u = parse_config("[profile]\ndiameter = 12 cm\nlength = 2 m\nsurface = tissue\n");
    CHECK(u.engine.profile.stations().size() == 1);
    CHECK(u.engine.profile.stations()[0].surface.kind == SurfaceKind::tissue);
    CHECK(u.engine.profile.length() == 2.0);

    auto e = parse_error("[profile]\nstation = 0 mm, 120 mm\nlength = 1 m\n");
    CHECK(e.key() == "profile.station");
    e = parse_error("[profile]\nstation = 0 mm, 120 mm, smooth\n");
    CHECK(e.key() == "profile.length");
    e = parse_error("[profile]\nstation = 0.2 m, 120 mm, smooth\nlength = 1 m\n");
    CHECK(e.key() == "profile.station");
    e = parse_error("[profile]\ndiameter = 120 mm\nlength = -1 m\n");
    CHECK(e.key() == "profile.length");
    e = parse_error("[profile]\npreset = rectum\n");
    CHECK(e.key() == "profile.preset");
  }

  TEST_CASE("sweep lists, surfaces and calibration source") {
    const auto sc = parse_config(
        "[sweep]\nrpm = 75 rpm, 150 rpm\ndiameters = 10 cm, 120 mm\nsurfaces = foam\n"
        "[surfaces]\nfoam.mu_c = 0.4\n[slip]\neta.smooth = 0.6\nknee_speed = 175 rpm\ndecay = 0.02 s/rad\n"
        "[calibration]\nfile = fit.csv\n");
    CHECK(sc.sweep_rpms == std::vector<double>{75.0, 150.0});
    REQUIRE(sc.sweep_diameters.size() == 2);
    CHECK(sc.sweep_diameters[0] == doctest::Approx(0.10));
    CHECK(sc.sweep_surfaces == std::vector<SurfaceKind>{SurfaceKind::foam});
    CHECK(sc.engine.resolve(default_surface(SurfaceKind::foam)).wall_friction == 0.4);
    CHECK(sc.engine.slip_for(SurfaceKind::smooth).eta_base == 0.6);
    CHECK(units::rad_s_to_rpm(sc.engine.slip.knee_speed) == doctest::Approx(175.0));
    CHECK(sc.engine.slip.decay == 0.02);
    CHECK(sc.calibration == CalibrationSource::file);
    CHECK(sc.calibration_file == "fit.csv");
  }

  TEST_CASE("example configs parse") {
    for (const char* name : {"uniform_smooth.cfg", "colon_4x.cfg", "diameter_sweep.cfg"}) {
      CAPTURE(name);
      const auto sc = load_config(std::string(ENDOSIM_SOURCE_DIR) + "/configs/" + name);
      CHECK_NOTHROW(sc.engine.validate());
    }
    const auto colon = load_config(std::string(ENDOSIM_SOURCE_DIR) + "/configs/colon_4x.cfg");
    CHECK(colon.engine.profile.scale() == 4.0);
    CHECK(colon.calibration == CalibrationSource::builtin);
  }

  TEST_CASE("quantity parser") {
    CHECK(parse_quantity("101 mbar", Dimension::pressure, "k", 1) == doctest::Approx(10100.0));
    CHECK(parse_quantity("1.5bar", Dimension::pressure, "k", 1) == doctest::Approx(150000.0));
    CHECK(parse_quantity("0.45 Nm", Dimension::torque, "k", 1) == doctest::Approx(0.45));
    CHECK_THROWS_AS(parse_quantity("nan mm", Dimension::length, "k", 1), ConfigError);
    CHECK_THROWS_AS(parse_quantity("3 mm", Dimension::ratio, "k", 1), ConfigError);
  }
}
