#pragma once

#include <numbers>

// Unit conventions used throughout: lengths in nm, angular frequencies in
// rad/s, polarizabilities in nm^3 (Gaussian volume convention), Green
// components in nm^-3.
namespace zmw::units
{
inline constexpr double pi = std::numbers::pi;
inline constexpr double speed_of_light_nm_per_s = 2.99792458e17;
inline constexpr double planck_constant_j_s = 6.62607015e-34;

// Vacuum wavenumber k0 = 2*pi/lambda in nm^-1.
constexpr double wavenumber(double wavelength_nm) { return 2.0 * pi / wavelength_nm; }

constexpr double omega_from_wavelength(double wavelength_nm)
{
    return 2.0 * pi * speed_of_light_nm_per_s / wavelength_nm;
}

constexpr double wavelength_from_omega(double omega_rad_s)
{
    return 2.0 * pi * speed_of_light_nm_per_s / omega_rad_s;
}

// k0 = omega / c in nm^-1.
constexpr double wavenumber_from_omega(double omega_rad_s) { return omega_rad_s / speed_of_light_nm_per_s; }

} // namespace zmw::units
