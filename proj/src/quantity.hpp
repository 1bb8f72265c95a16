#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace endosim::detail {

struct NumberWithUnit {
  double value;
  std::string unit;
};

// "12.5 mm", "12.5mm", "-101mbar", "4". Unit is whatever follows the number,
// trimmed; empty when absent.
inline std::optional<NumberWithUnit> parse_number_with_unit(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc()) return std::nullopt;
  std::string_view rest(res.ptr, static_cast<std::size_t>(text.data() + text.size() - res.ptr));
  while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) rest.remove_prefix(1);
  return NumberWithUnit{v, std::string(rest)};
}

}  // namespace endosim::detail
