#include "endosim/csv.hpp"

#include <charconv>
#include <cstdio>

namespace endosim::csv {

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.9g", value);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::string format_exact(double value) {
  if (value == 0.0) value = 0.0;
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string trace(std::span<const StepRecord> records) {
  std::string out(kTraceHeader);
  out += '\n';
  for (const auto& r : records) {
    for (double v : {r.t, r.x, r.pipe_diameter, r.pressure, r.normal_force, r.thrust, r.capacity, r.velocity}) {
      out += format_number(v);
      out += ',';
    }
    out += r.stalled ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string rpm_sweep(std::span<const RpmSweepRow> rows) {
  std::string out(kRpmSweepHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += format_number(r.rpm) + ',' + std::string(to_string(r.surface)) + ',' + format_number(r.mean_velocity) +
           ',' + format_number(r.peak_thrust) + '\n';
  }
  return out;
}

std::string diameter_sweep(std::span<const DiameterSweepRow> rows) {
  std::string out(kDiameterSweepHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += format_number(r.diameter) + ',' + format_number(r.inside_pressure) + ',' +
           format_number(r.outside_pressure) + ',' + format_number(r.thrust) + '\n';
  }
  return out;
}

}  // namespace endosim::csv
