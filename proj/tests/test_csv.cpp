#include <doctest.h>

#include <string>
#include <vector>

#include "endosim/csv.hpp"
#include "endosim/engine.hpp"

using namespace endosim;

namespace {

// Every line ends in '\n', has no '\r', and carries as many fields as the header.
void check_layout(const std::string& text, std::string_view header) {
  REQUIRE_FALSE(text.empty());
  CHECK(text.back() == '\n');
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.substr(0, header.size() + 1) == std::string(header) + "\n");
  const auto columns = csv::split(header).size();
  std::size_t start = 0;
  while (start < text.size()) {
    const auto end = text.find('\n', start);
    const auto fields = csv::split(std::string_view(text).substr(start, end - start));
    CHECK(fields.size() == columns);
    for (const auto& f : fields) CHECK_FALSE(f.empty());
    start = end + 1;
  }
}

}  // namespace

TEST_SUITE("csv") {
  TEST_CASE("number formatting") {
    CHECK(csv::format_number(0.0) == "0");
    CHECK(csv::format_number(-0.0) == "0");
    CHECK(csv::format_number(0.1) == "0.1");
    CHECK(csv::format_number(64.68123456789) == "64.6812346");
    CHECK(csv::format_number(1.0 / 3.0) == "0.333333333");
    CHECK(csv::format_number(-12345.5) == "-12345.5");
    CHECK(csv::format_number(1e-12) == "1e-12");
    const double x = 0.16619309433392906;
    CHECK(std::stod(csv::format_exact(x)) == x);
  }

  TEST_CASE("split and trim") {
    CHECK(csv::trim("  a b \t") == "a b");
    CHECK(csv::split("a, b,,c") == std::vector<std::string>{"a", "b", "", "c"});
    CHECK(csv::split("") == std::vector<std::string>{""});
  }

  TEST_CASE("trace layout") {
    EngineConfig c;
    c.profile = colon_preset(4.0);
    c.run.dt = 0.5;
    const auto text = csv::trace(run(c));
    check_layout(text, csv::kTraceHeader);
    CHECK(csv::trace({}) == std::string(csv::kTraceHeader) + "\n");
  }

  TEST_CASE("sweep layouts") {
    EngineConfig c;
    c.profile = uniform_pipe(0.14, 0.05, default_surface(SurfaceKind::smooth));
    const std::vector<double> rpms = {75, 300};
    const std::vector<SurfaceKind> surfaces = {SurfaceKind::smooth, SurfaceKind::foam};
    const auto rpm_text = csv::rpm_sweep(sweep_rpm(c, rpms, surfaces));
    check_layout(rpm_text, csv::kRpmSweepHeader);
    CHECK(rpm_text.find("\n75,smooth,") != std::string::npos);
    CHECK(rpm_text.find("\n300,foam,") != std::string::npos);

    const std::vector<double> tubes = {0.10, 0.14};
    const auto dia_text = csv::diameter_sweep(sweep_diameter(c, tubes));
    check_layout(dia_text, csv::kDiameterSweepHeader);
    CHECK(dia_text.find("\n0.14,") != std::string::npos);
  }
}
