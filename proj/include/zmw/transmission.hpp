#pragma once

#include "zmw/errors.hpp"
#include "zmw/kernels/lineshape.hpp"
#include "zmw/materials.hpp"
#include "zmw/polarizability.hpp"

#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace zmw
{
// Sign of the resonant denominator in the transmission lineshape.
//  Retarded: (omega~ - omega) - i Gamma~/2, consistent with the e^{-i omega t}
//            polarizabilities. With a positive real coupling the blocking dip
//            lies on the short-wavelength side of resonance and the
//            transmission peak on the long-wavelength side.
//  Inverted: (omega - omega~) + i Gamma~/2, identical to Retarded with the
//            coupling negated; extrema values are unchanged, sides swap.
enum class LineshapeSign
{
    Retarded,
    Inverted
};

// 3 / (16 pi^3), geometric prefactor linking xibar to the Fano coupling.
inline constexpr double kFanoCouplingPrefactor =
    3.0 / (16.0 * std::numbers::pi * std::numbers::pi * std::numbers::pi);

struct FanoModel
{
    double omega_tilde = 0.0; // rad/s
    double gamma_tilde = 0.0; // rad/s
    complex coupling;
    std::optional<double> xibar;
    double baseline = 1.0;
    LineshapeSign sign = LineshapeSign::Retarded;

    // Throws DomainError unless gamma_tilde > 0, baseline > 0, all finite.
    void validate() const;
    kernels::LineshapeParams kernel_params() const;
};

struct SpectrumPoint
{
    double wavelength_nm = 0.0;
    double value = 0.0;
};

struct Spectrum
{
    std::vector<SpectrumPoint> points;

    // Throws DomainError unless wavelengths strictly increase and values are
    // finite and non-negative.
    void validate() const;
    std::vector<double> wavelengths() const;
    std::vector<double> values() const;
    std::size_t size() const { return points.size(); }
};

// n points from lo to hi inclusive, n >= 2.
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

// |1 + xi alpha|^2.
double detector_power_ratio(complex alpha, complex xi);

struct DetectorConfig
{
    double area_nm2 = 1.0;
    complex xi;                       // nm^-3, detector-to-atom coupling
    double reference_intensity = 1.0; // intensity at the detector without the atom
};

// P0 = reference_intensity * area.
double reference_power(const DetectorConfig &cfg);
// P0 |1 + xi alpha|^2. Throws DomainError for non-positive area.
double detected_power(const DetectorConfig &cfg, complex alpha);

// A = xibar (3 / 16 pi^3) (lambda0 / R)^3.
double fano_coupling_from_xibar(double xibar, double lambda0_nm, double radius_nm);

// baseline |1 + A (Gamma~/2) / ((omega~ - omega) - i Gamma~/2)|^2.
double fano_transmission(double omega, const FanoModel &model);
void fano_transmission(std::span<const double> omega, const FanoModel &model, std::span<double> out);

Spectrum fano_spectrum(std::span<const double> wavelengths_nm, const FanoModel &model, unsigned threads = 1);

// Bessel normalisation of the TE11 coupling uses [J_1(z*)]^kTe11NormPower.
inline constexpr int kTe11NormPower = 2;

// B = 3 z*^2 / (2 k0 R (z*^2 - 1) J_1(z*)^2 sqrt(z*^2 - k0^2 R^2)).
// Throws RegimeError when k0 R >= z*.
double pec_deep_coefficient(double omega, double radius_nm);

// Deep perfectly conducting hole, TE11 only: the Fano lineshape with coupling
// B(omega). No depth dependence. Throws RegimeError outside the zero-mode
// regime and DomainError when |omega - omega~| > 1e6 Gamma~.
double pec_deep_transmission(double omega, double radius_nm, const PurcellResult &purcell,
                             LineshapeSign sign = LineshapeSign::Retarded);

Spectrum pec_deep_spectrum(std::span<const double> wavelengths_nm, double radius_nm, const PurcellResult &purcell,
                           LineshapeSign sign = LineshapeSign::Retarded, unsigned threads = 1);

enum class DipoleOrientation
{
    PerpendicularToWall, // along rho
    ParallelToWall       // along phi
};

// Relative line shift of an off-axis dipole from its wall image,
// (3/4) Re((eps-1)/(eps+1)) R^3 / (R - rho)^3, halved for a parallel dipole.
// Qualitative; warns near the wall (R - rho < R/4) and near the axis (rho < R/4).
double off_axis_shift(double rho_nm, double radius_nm, complex eps_wall, DipoleOrientation orientation,
                      Warnings *warnings = nullptr);

} // namespace zmw
