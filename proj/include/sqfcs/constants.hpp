// constants.hpp — unit conventions and physical constants
//
// Unit system used throughout: rates and angular frequencies in THz (= 1/ps),
// time in ps, temperatures in Kelvin. Entropy is reported in units of k_B
// (k_B = 1 internally).

#pragma once

#include <numbers>

namespace sqfcs {

inline constexpr double kPi = std::numbers::pi;

// CODATA hbar [J s] and the exact SI k_B [J/K].
inline constexpr double kHbarJs = 1.054571817e-34;
inline constexpr double kBoltzmannJperK = 1.380649e-23;

// Converts an angular frequency in THz to its temperature equivalent in K:
// theta = hbar * omega / k_B.  (hbar/k_B in K*ps.)
inline constexpr double kKelvinPerThz = kHbarJs / kBoltzmannJperK * 1e12;

}  // namespace sqfcs
