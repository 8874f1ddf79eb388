#pragma once

namespace collapse::constants {

// 2018 CODATA values, SI units.
inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double gravitation = 6.67430e-11;       // m^3 kg^-1 s^-2
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg

// Reference mass for mass-proportional coupling (one nucleon).
inline constexpr double reference_mass = atomic_mass_unit;

inline constexpr double pi = 3.141592653589793238462643383279502884;

}  // namespace collapse::constants
