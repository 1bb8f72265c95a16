#include <doctest.h>

#include <cmath>

#include "endosim/csv.hpp"
#include "endosim/engine.hpp"
#include "endosim/errors.hpp"
#include "endosim/units.hpp"
#include "oracles.hpp"

using namespace endosim;

namespace {

// Frictionless transmission on a pipe the tip can grip.
EngineConfig ideal_config() {
  EngineConfig c;
  c.slip.eta_base = 1.0;
  c.slip.knee_speed = c.motor.no_load_speed;
  c.profile = uniform_pipe(0.14, 0.2, default_surface(SurfaceKind::smooth));
  return c;
}

}  // namespace

TEST_SUITE("engine") {
  TEST_CASE("slip efficiency") {
    const SlipModel s;
    CHECK(efficiency(0.0, s) == s.eta_base);
    CHECK(efficiency(s.knee_speed, s) == s.eta_base);
    CHECK(efficiency(s.knee_speed + 5.0, s) == doctest::Approx(s.eta_base * std::exp(-s.decay * 5.0)));
    CHECK(efficiency(s.knee_speed + 5.0, s) < efficiency(s.knee_speed + 1.0, s));
    SlipModel bad = s;
    bad.eta_base = 1.5;
    CHECK_THROWS_AS(bad.validate(), InvalidParams);
  }

  TEST_CASE("required pressure") {
    const EngineConfig c;
    CHECK(required_pressure(0.14, 0.0, {}, c.strut, c.bellows) == 0.0);
    for (double w : {0.10, 0.12, 0.14}) {
      const double outside = pressure_for_diameter(w, c.strut, c.bellows);
      CHECK(required_pressure(w, 0.5, {}, c.strut, c.bellows) > outside);
      double last = outside;
      for (double n = 0.1; n < 3.0; n += 0.1) {
        const double p = required_pressure(w, n, {}, c.strut, c.bellows);
        CHECK(p >= last);
        last = p;
      }
    }
    CHECK_THROWS_AS(required_pressure(0.14, 1e3, {}, c.strut, c.bellows), ForceInfeasible);
    Resistance weight;
    weight.weight_load = 0.3;
    CHECK(required_pressure(0.14, 0.0, weight, c.strut, c.bellows) > 0.0);
  }

  TEST_CASE("operating point") {
    EngineConfig c = ideal_config();
    const SurfaceSpec smooth = default_surface(SurfaceKind::smooth);
    const auto op = operating_point(c, 0.14, smooth, 300.0);
    CHECK_FALSE(op.stalled);
    CHECK(op.velocity * 1e3 == doctest::Approx(64.68).epsilon(1e-4));
    CHECK(op.velocity == doctest::Approx(oracle::gear_velocity(300.0, 28e-3, 5, 34)).epsilon(1e-14));
    CHECK(op.thrust == doctest::Approx(std::min(op.raw_thrust, op.capacity)));

    c.velocity_model = VelocityModel::lead;
    CHECK(operating_point(c, 0.14, smooth, 300.0).velocity * 1e3 == doctest::Approx(15.0).epsilon(1e-12));

    // Lumen wide enough that the bracket closes: no traction, no motion.
    const auto lost = operating_point(c, 0.35, smooth, 300.0);
    CHECK(lost.capacity == 0.0);
    CHECK(lost.stalled);
    CHECK(lost.velocity == 0.0);

    c.resistance.tether_drag = 100.0;
    const auto dragged = operating_point(c, 0.14, smooth, 300.0);
    CHECK(dragged.stalled);
    CHECK(dragged.velocity == 0.0);

    CHECK_THROWS_AS(operating_point(c, 0.05, smooth, 300.0), UnreachableDiameter);
  }

  TEST_CASE("run and trace") {
    EngineConfig c = ideal_config();
    const auto trace = run(c);
    REQUIRE_FALSE(trace.empty());
    CHECK(trace.back().x == c.profile.length());
    for (const auto& r : trace) {
      CHECK(r.velocity >= 0.0);
      if (r.stalled) CHECK(r.velocity == 0.0);
    }

    c.profile = uniform_pipe(0.14, 0.0, default_surface(SurfaceKind::smooth));
    CHECK(run(c).empty());
  }

  TEST_CASE("stall ends the run after the timeout") {
    EngineConfig c = ideal_config();
    c.resistance.tether_drag = 100.0;
    c.run.dt = 0.1;
    c.run.stall_timeout = 0.5;
    const auto trace = run(c);
    REQUIRE_FALSE(trace.empty());
    CHECK(trace.size() == 6);
    for (const auto& r : trace) {
      CHECK(r.stalled);
      CHECK(r.velocity == 0.0);
      CHECK(r.x == 0.0);
    }
  }

  TEST_CASE("max steps bounds the run") {
    EngineConfig c = ideal_config();
    c.run.max_steps = 3;
    CHECK(run(c).size() == 3);
  }

  TEST_CASE("trace endpoints do not depend on dt") {
    EngineConfig c;
    c.profile = colon_preset(4.0);
    double reference = -1.0;
    for (double dt : {0.001, 0.01, 0.1}) {
      c.run.dt = dt;
      const auto trace = run(c);
      REQUIRE_FALSE(trace.empty());
      if (reference < 0.0) reference = trace.back().x;
      CHECK(std::abs(trace.back().x - reference) <= 1e-9 * c.profile.length());
    }
  }

  TEST_CASE("runs are deterministic") {
    EngineConfig c;
    c.profile = colon_preset(4.0);
    c.run.dt = 0.05;
    CHECK(csv::trace(run(c)) == csv::trace(run(c)));
  }

  TEST_CASE("rpm sweep") {
    EngineConfig c = ideal_config();
    const std::vector<double> one = {150.0};
    const std::vector<SurfaceKind> smooth = {SurfaceKind::smooth};
    CHECK(sweep_rpm(c, one, smooth).size() == 1);

    const std::vector<double> rpms = {75, 120, 150, 200, 300};
    const std::vector<SurfaceKind> surfaces = {SurfaceKind::smooth, SurfaceKind::tissue, SurfaceKind::foam};
    const auto par = sweep_rpm(c, rpms, surfaces, {true});
    const auto ser = sweep_rpm(c, rpms, surfaces, {false});
    REQUIRE(par.size() == 15);
    CHECK(csv::rpm_sweep(par) == csv::rpm_sweep(ser));
    for (std::size_t i = 0; i < par.size(); ++i) {
      CHECK(par[i].rpm == rpms[i / 3]);
      CHECK(par[i].surface == surfaces[i % 3]);
    }
    CHECK_THROWS_AS(sweep_rpm(c, {}, surfaces), InvalidParams);
  }

  TEST_CASE("diameter sweep") {
    const EngineConfig c;
    const std::vector<double> tubes = {0.10, 0.12, 0.14, 0.15};
    const auto rows = sweep_diameter(c, tubes);
    REQUIRE(rows.size() == 4);
    CHECK(rows[2].outside_pressure == 0.0);
    for (const auto& r : rows) {
      if (r.diameter <= 0.14) CHECK(r.inside_pressure >= r.outside_pressure);
    }
    CHECK(rows[0].inside_pressure > rows[0].outside_pressure);
    CHECK(rows[1].inside_pressure > rows[1].outside_pressure);
    CHECK(csv::diameter_sweep(rows) == csv::diameter_sweep(sweep_diameter(c, tubes, {false})));
  }

  TEST_CASE("config validation") {
    EngineConfig c;
    CHECK_NOTHROW(c.validate());
    c.rpm = 700.0;
    CHECK_THROWS_AS(c.validate(), InvalidParams);
    c = {};
    c.run.dt = 0.0;
    CHECK_THROWS_AS(run(c), InvalidParams);
  }
}
