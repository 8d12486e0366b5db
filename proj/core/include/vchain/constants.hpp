#pragma once

// Internal unit system: hbar = 1, energies in meV, times in ps, lengths in nm.
// All unit conversions happen at the configuration boundary; engine code only
// ever sees quantities already expressed in these units.

namespace vchain {

inline constexpr double hbar_meV_ps = 0.6582;      // hbar in meV*ps
inline constexpr double kB_meV_per_K = 0.08617;    // Boltzmann constant in meV/K

// 1 J*s^2/m^5 (mass density) and friends reduce to the single factor below:
// 1 kg = 1 J*s^2/m^2 = 6.241509074e27 meV*ps^2/nm^2.
inline constexpr double kg_to_internal = 6.241509074e27;          // meV ps^2 / nm^2
inline constexpr double kg_per_m3_to_internal = 6.241509074;      // meV ps^2 / nm^5
inline constexpr double m_per_s_to_nm_per_ps = 1e-3;
inline constexpr double eV_to_meV = 1e3;

} // namespace vchain
