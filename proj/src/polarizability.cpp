#include "zmw/polarizability.hpp"

#include "zmw/units.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace zmw
{
namespace
{
constexpr double kQuasistaticLimit = 0.1;

double norm(const Vec3 &v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }
} // namespace

TwoLevelAtom::TwoLevelAtom(double omega0, double gamma0, Vec3 orientation, Warnings *warnings)
    : omega0_(omega0), gamma0_(gamma0), orientation_(orientation)
{
    if (!(omega0 > 0.0) || !std::isfinite(omega0))
        throw DomainError("TwoLevelAtom: omega0 must be positive");
    if (!(gamma0 > 0.0) || !std::isfinite(gamma0))
        throw DomainError("TwoLevelAtom: gamma0 must be positive");
    if (std::abs(norm(orientation) - 1.0) > 1e-12)
        throw DomainError("TwoLevelAtom: orientation must be a unit vector");
    if (gamma0 > 0.01 * omega0)
        warn(warnings, "TwoLevelAtom: gamma0/omega0 = " + std::to_string(gamma0 / omega0) +
                           " is not small; the Lorentzian form is inaccurate");
}

MetaAtom::MetaAtom(double radius_nm, double plasma_frequency, Warnings *warnings)
    : radius_nm_(radius_nm), plasma_frequency_(plasma_frequency)
{
    if (!(radius_nm > 0.0) || !std::isfinite(radius_nm))
        throw DomainError("MetaAtom: radius must be positive");
    if (!(plasma_frequency > 0.0) || !std::isfinite(plasma_frequency))
        throw DomainError("MetaAtom: plasma frequency must be positive");
    const double k_res = units::wavenumber_from_omega(plasma_frequency / std::sqrt(3.0));
    if (k_res * radius_nm >= kQuasistaticLimit)
        warn(warnings, "MetaAtom: k R_A = " + std::to_string(k_res * radius_nm) +
                           " at resonance; quasistatic form needs k R_A < 0.1");
}

MetaAtom MetaAtom::for_resonance(double lambda0_nm, double radius_nm, Warnings *warnings)
{
    if (!(lambda0_nm > 0.0))
        throw DomainError("MetaAtom: resonance wavelength must be positive");
    return MetaAtom(radius_nm, std::sqrt(3.0) * units::omega_from_wavelength(lambda0_nm), warnings);
}

GreenComponent::GreenComponent(complex v) : value(v)
{
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw DomainError("GreenComponent: value must be finite");
}

complex lorentzian_polarizability(double omega, double omega0, double gamma)
{
    if (!(omega > 0.0))
        throw DomainError("polarizability: omega must be positive");
    const double k = units::wavenumber_from_omega(omega);
    const double prefactor = 3.0 / (4.0 * k * k * k);
    return prefactor * gamma / complex(omega0 - omega, -0.5 * gamma);
}

complex atom_polarizability(double omega, const TwoLevelAtom &atom)
{
    return lorentzian_polarizability(omega, atom.omega0(), atom.gamma0());
}

double resonant_cross_section(double lambda0_nm)
{
    if (!(lambda0_nm > 0.0))
        throw DomainError("resonant_cross_section: wavelength must be positive");
    return 3.0 * lambda0_nm * lambda0_nm / (2.0 * units::pi);
}

double dipole_scattering_cross_section(complex alpha, double k0)
{
    return 8.0 * units::pi / 3.0 * std::pow(k0, 4) * std::norm(alpha);
}

complex meta_atom_polarizability(double omega, const MetaAtom &atom, Warnings *warnings)
{
    const complex eps = drude_permittivity(omega, atom.plasma_frequency());
    const double kr = units::wavenumber_from_omega(omega) * atom.radius_nm();
    if (kr > kQuasistaticLimit)
        warn(warnings, "meta_atom_polarizability: k R_A = " + std::to_string(kr) + " exceeds 0.1");
    const double r3 = atom.radius_nm() * atom.radius_nm() * atom.radius_nm();
    return r3 * (eps - 1.0) / (eps + 2.0 + complex(0.0, 2.0 * kr * kr * kr));
}

LorentzianParams meta_atom_lorentzian_params(const MetaAtom &atom, double omega)
{
    if (!(omega > 0.0))
        throw DomainError("meta_atom_lorentzian_params: omega must be positive");
    const double kr = units::wavenumber_from_omega(omega) * atom.radius_nm();
    const double sqrt3 = std::sqrt(3.0);
    return {atom.plasma_frequency() / sqrt3, atom.plasma_frequency() * 2.0 * kr * kr * kr / (3.0 * sqrt3)};
}

PurcellResult purcell_modify(const TwoLevelAtom &atom, double k0, GreenComponent g, Warnings *warnings)
{
    if (!(k0 > 0.0))
        throw DomainError("purcell_modify: k0 must be positive");
    const double k3 = k0 * k0 * k0;
    PurcellResult out;
    out.omega_tilde = atom.omega0() - 3.0 * atom.gamma0() / (4.0 * k3) * g.value.real();
    out.gamma_tilde = atom.gamma0() * (1.0 + 3.0 / (2.0 * k3) * g.value.imag());
    if (out.gamma_tilde < 0.0)
    {
        std::ostringstream msg;
        msg << "purcell_modify: linewidth " << out.gamma_tilde
            << " rad/s is negative (unphysical Green component); clamped to 0";
        warn(warnings, msg.str());
        out.gamma_tilde = 0.0;
        out.clamped = true;
    }
    return out;
}

Tensor3 free_space_green(const Vec3 &r, double k0)
{
    const double dist = norm(r);
    if (!(dist > 0.0))
        throw DomainError("free_space_green: singular at r = 0");
    const Vec3 n{r[0] / dist, r[1] / dist, r[2] / dist};
    const complex phase = std::exp(complex(0.0, k0 * dist));
    const complex near = complex(1.0, -k0 * dist) / (dist * dist * dist);
    const double far = k0 * k0 / dist;
    Tensor3 g{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
        {
            const double delta = i == j ? 1.0 : 0.0;
            const double nn = n[i] * n[j];
            g[i][j] = (far * (delta - nn) + (3.0 * nn - delta) * near) * phase;
        }
    return g;
}

Tensor3 free_space_green_far_field(const Vec3 &r, double k0)
{
    const double dist = norm(r);
    if (!(dist > 0.0))
        throw DomainError("free_space_green_far_field: singular at r = 0");
    const Vec3 n{r[0] / dist, r[1] / dist, r[2] / dist};
    const complex scale = k0 * k0 / dist * std::exp(complex(0.0, k0 * dist));
    Tensor3 g{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            g[i][j] = ((i == j ? 1.0 : 0.0) - n[i] * n[j]) * scale;
    return g;
}

complex effective_polarizability(complex alpha0, GreenComponent g)
{
    if (alpha0 == complex(0.0, 0.0))
        throw DomainError("effective_polarizability: alpha0 must be nonzero");
    const complex inverse = 1.0 / alpha0 - g.value;
    if (std::abs(inverse) < std::numeric_limits<double>::min())
        throw DomainError("effective_polarizability: pole (1/alpha0 - G vanishes)");
    return 1.0 / inverse;
}

} // namespace zmw
