#include "dslit/units.hpp"

#include <array>
#include <charconv>
#include <string>
#include <utility>

#include "dslit/errors.hpp"

namespace dslit::units {

namespace {

constexpr std::array<std::pair<std::string_view, double>, 22> kSuffixes{{
    {"GHz", 1e9}, {"MHz", 1e6}, {"kHz", 1e3}, {"Hz", 1.0},
    {"ms", 1e-3}, {"us", 1e-6}, {"µs", 1e-6}, {"ns", 1e-9}, {"ps", 1e-12}, {"s", 1.0},
    {"mm", 1e-3}, {"um", 1e-6}, {"µm", 1e-6}, {"nm", 1e-9}, {"m", 1.0},
    {"mA", 1e-3}, {"uA", 1e-6}, {"µA", 1e-6}, {"nA", 1e-9}, {"A", 1.0},
    {"m/s", 1.0}, {"km/s", 1e3},
}};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

double parse_quantity(std::string_view text) {
  const std::string_view s = trim(text);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || end == s.data()) {
    throw ConfigError("cannot parse quantity '" + std::string(text) + "'");
  }
  const std::string_view unit = trim(std::string_view(end, s.data() + s.size() - end));
  if (unit.empty()) return value;
  for (const auto& [suffix, scale] : kSuffixes) {
    if (unit == suffix) return value * scale;
  }
  throw ConfigError("unknown unit '" + std::string(unit) + "' in '" + std::string(text) + "'");
}

}  // namespace dslit::units
