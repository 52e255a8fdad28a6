#pragma once

#include <cmath>
#include <numbers>
#include <string_view>

namespace dslit {

inline constexpr double kPi = std::numbers::pi;

namespace units {

inline constexpr double kHz = 1e3;
inline constexpr double MHz = 1e6;
inline constexpr double GHz = 1e9;
inline constexpr double ns = 1e-9;
inline constexpr double us = 1e-6;
inline constexpr double nm = 1e-9;
inline constexpr double um = 1e-6;
inline constexpr double mA = 1e-3;
inline constexpr double uA = 1e-6;

// Parses "4.24 GHz", "9.04ns", "675 nm", "79.2 uA", "2880 m/s" or a bare
// number into SI units (Hz, s, m, A, m/s). Throws ConfigError on anything
// it does not recognise.
double parse_quantity(std::string_view text);

}  // namespace units

// sin(x)/x, with the removable singularity at 0 handled by its series.
inline double sinc(double x) {
  if (x < 1e-8 && x > -1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace dslit
