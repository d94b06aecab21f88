#pragma once

#include "zmw/errors.hpp"
#include "zmw/materials.hpp"

#include <array>
#include <complex>

// Scatterer response in the e^{-i omega t} convention. Every Lorentzian is
// written with the denominator (omega0 - omega - i Gamma/2), so Im(alpha) > 0
// on resonance. Lengths in nm, frequencies in rad/s, alpha in nm^3.
namespace zmw
{
using Vec3 = std::array<double, 3>;
using Tensor3 = std::array<std::array<complex, 3>, 3>;

class TwoLevelAtom
{
public:
    // Throws DomainError unless gamma0 > 0, omega0 > 0 and |orientation| = 1
    // within 1e-12. Warns when gamma0 > 0.01 omega0.
    TwoLevelAtom(double omega0, double gamma0, Vec3 orientation = {1.0, 0.0, 0.0}, Warnings *warnings = nullptr);

    double omega0() const { return omega0_; }
    double gamma0() const { return gamma0_; }
    const Vec3 &orientation() const { return orientation_; }

private:
    double omega0_;
    double gamma0_;
    Vec3 orientation_;
};

// Small Drude sphere standing in for an atom.
class MetaAtom
{
public:
    // Warns when k R_A > 0.1 at the plasmon resonance omega_pl/sqrt(3).
    MetaAtom(double radius_nm, double plasma_frequency, Warnings *warnings = nullptr);

    // Plasma frequency chosen so the resonance sits at lambda0.
    static MetaAtom for_resonance(double lambda0_nm, double radius_nm, Warnings *warnings = nullptr);

    double radius_nm() const { return radius_nm_; }
    double plasma_frequency() const { return plasma_frequency_; }

private:
    double radius_nm_;
    double plasma_frequency_;
};

// Projected reflected Green component m.G^R.m (or a transverse component),
// nm^-3.
struct GreenComponent
{
    complex value;

    GreenComponent() = default;
    explicit GreenComponent(complex v);
};

struct PurcellResult
{
    double omega_tilde = 0.0;
    double gamma_tilde = 0.0;
    bool clamped = false; // linewidth formula went negative and was set to 0
};

struct LorentzianParams
{
    double omega0 = 0.0;
    double gamma = 0.0;
};

// (3/(4 k^3)) Gamma / (omega0 - omega - i Gamma/2), k = omega/c.
complex lorentzian_polarizability(double omega, double omega0, double gamma);

complex atom_polarizability(double omega, const TwoLevelAtom &atom);

// sigma = 3 lambda0^2 / (2 pi), nm^2.
double resonant_cross_section(double lambda0_nm);

// Total scattering cross-section of a point dipole, (8 pi / 3) k^4 |alpha|^2.
double dipole_scattering_cross_section(complex alpha, double k0);

// R^3 (eps - 1) / (eps + 2 + 2 i (k R)^3) with Drude eps. Warns when k R > 0.1.
complex meta_atom_polarizability(double omega, const MetaAtom &atom, Warnings *warnings = nullptr);

// omega0 = omega_pl / sqrt(3), gamma = omega_pl 2 (k R)^3 / (3 sqrt(3)), k = omega/c.
LorentzianParams meta_atom_lorentzian_params(const MetaAtom &atom, double omega);

// Environment-shifted resonance:
//   omega~ = omega0 - (3 Gamma0 / 4 k0^3) Re g,  Gamma~ = Gamma0 (1 + (3 / 2 k0^3) Im g).
// k0 in nm^-1. A negative Gamma~ is clamped to 0 with a warning.
PurcellResult purcell_modify(const TwoLevelAtom &atom, double k0, GreenComponent g, Warnings *warnings = nullptr);

// Dyadic free-space Green tensor for separation r (nm), k0 in nm^-1.
// Throws DomainError at r = 0.
Tensor3 free_space_green(const Vec3 &r, double k0);

// Radiation-zone part k0^2 (delta - n n) e^{i k0 r} / r alone.
Tensor3 free_space_green_far_field(const Vec3 &r, double k0);

// 1 / (1/alpha0 - g). Throws DomainError for alpha0 = 0 or at the pole.
complex effective_polarizability(complex alpha0, GreenComponent g);

} // namespace zmw
