#include <doctest.h>

#include <cmath>

#include "endosim/errors.hpp"
#include "endosim/interp.hpp"
#include "endosim/simplex.hpp"

using endosim::PiecewiseLinear;

TEST_SUITE("interp") {
  TEST_CASE("piecewise linear evaluates, extrapolates and rejects out-of-range") {
    const PiecewiseLinear f({{-1.0, -2.0}, {0.0, 0.0}, {2.0, 8.0}});
    CHECK(f(0.0) == 0.0);
    CHECK(f(-0.5) == doctest::Approx(-1.0));
    CHECK(f(1.0) == doctest::Approx(4.0));
    CHECK(f(2.0) == 8.0);
    CHECK(f.extrapolate(3.0) == doctest::Approx(12.0));
    CHECK(f.extrapolate(-2.0) == doctest::Approx(-4.0));
    CHECK_THROWS_AS(f(2.5), endosim::OutOfRange);
    CHECK(f.strictly_increasing());
    CHECK_FALSE(f.strictly_decreasing());
  }

  TEST_CASE("piecewise linear requires monotone ordinates") {
    CHECK_THROWS_AS(PiecewiseLinear({{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.5}}), endosim::InvalidParams);
    CHECK_THROWS_AS(PiecewiseLinear({{0.0, 0.0}, {0.0, 1.0}}), endosim::InvalidParams);
    CHECK_NOTHROW(PiecewiseLinear({{0.0, 0.0}, {1.0, 0.0}}));
  }

  TEST_CASE("insert keeps points sorted and replaces duplicates") {
    PiecewiseLinear f({{0.0, 0.0}, {2.0, 2.0}});
    f.insert({1.0, 0.5});
    REQUIRE(f.points().size() == 3);
    CHECK(f(1.0) == 0.5);
    f.insert({1.0, 1.5});
    CHECK(f.points().size() == 3);
    CHECK(f(1.0) == 1.5);
    const auto g = f.scaled(2.0);
    CHECK(g(2.0) == 4.0);
  }

  TEST_CASE("bisection finds the root of an increasing and a decreasing map") {
    const double up = endosim::bisect_monotone([](double x) { return x * x * x; }, 8.0, 0.0, 5.0, 1e-12);
    CHECK(up == doctest::Approx(2.0).epsilon(1e-10));
    const double down = endosim::bisect_monotone([](double x) { return -x; }, -3.0, 0.0, 10.0, 1e-12);
    CHECK(down == doctest::Approx(3.0).epsilon(1e-10));
    CHECK_THROWS(endosim::bisect_monotone([](double x) { return x; }, 20.0, 0.0, 10.0, 1e-12));
  }
}

TEST_SUITE("interp") {
  TEST_CASE("bounded simplex minimises a shifted quadratic and respects the box") {
    auto f = [](std::span<const double> x) {
      return (x[0] - 0.3) * (x[0] - 0.3) + 10.0 * (x[1] + 0.2) * (x[1] + 0.2);
    };
    const std::vector<double> x0 = {0.9, 0.9}, lo = {0.0, 0.0}, hi = {1.0, 1.0};
    const auto r = endosim::minimize_bounded(f, x0, lo, hi);
    CHECK(r.x[0] == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(r.x[1] == doctest::Approx(0.0));
    CHECK(r.f == doctest::Approx(0.4));
  }

  TEST_CASE("zero-dimensional simplex evaluates once") {
    int calls = 0;
    auto f = [&](std::span<const double>) {
      ++calls;
      return 7.0;
    };
    const std::vector<double> none;
    const auto r = endosim::minimize_bounded(f, none, none, none);
    CHECK(r.f == 7.0);
    CHECK(r.converged);
    CHECK(calls == 1);
  }
}
