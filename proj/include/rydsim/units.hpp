#pragma once

#include <numbers>

// Unit conventions used throughout:
//   time               microseconds (us)
//   angular frequency  rad/us
//   length             micrometers (um), lattice distances in units of the spacing a
// Drive strengths quoted by experiments as nu = omega/2pi in MHz convert via
// angular_from_mhz: 1 MHz of nu equals 2*pi rad/us.
namespace rydsim {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr double angular_from_mhz(double f_mhz) { return two_pi * f_mhz; }
constexpr double mhz_from_angular(double w) { return w / two_pi; }

}  // namespace rydsim
