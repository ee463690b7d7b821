// units.hpp -- unit conventions shared across the library.
//
// All energies and angular frequencies are stored in rad/ns, all times in ns.
// Device files and reports use ordinary frequencies in GHz; the conversion is
// a factor of 2*pi (1 GHz corresponds to 2*pi rad/ns).
#pragma once

#include <numbers>

namespace transmon {

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double pi = std::numbers::pi;

constexpr double ghz_to_radns(double f_ghz) { return two_pi * f_ghz; }
constexpr double radns_to_ghz(double w_radns) { return w_radns / two_pi; }

}  // namespace transmon
