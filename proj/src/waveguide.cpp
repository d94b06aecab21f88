#include "zmw/waveguide.hpp"

#include "zmw/errors.hpp"
#include "zmw/units.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace zmw
{
ZmwGeometry::ZmwGeometry(double radius, double depth, MaterialModel wall)
    : radius_nm(radius), depth_nm(depth), wall_material(std::move(wall))
{
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw DomainError("ZmwGeometry: radius must be positive");
    if (!(depth > 0.0) || !std::isfinite(depth))
        throw DomainError("ZmwGeometry: depth must be positive");
}

double AtomPosition::rho_nm() const { return std::hypot(x_nm, y_nm); }

void validate_position(const ZmwGeometry &geom, const AtomPosition &pos)
{
    if (!(pos.x_nm * pos.x_nm + pos.y_nm * pos.y_nm < geom.radius_nm * geom.radius_nm))
        throw DomainError("atom position: rho = " + std::to_string(pos.rho_nm()) + " nm is not inside radius " +
                          std::to_string(geom.radius_nm) + " nm");
    if (!(pos.z_nm >= 0.0 && pos.z_nm <= geom.depth_nm))
        throw DomainError("atom position: z = " + std::to_string(pos.z_nm) + " nm outside [0, " +
                          std::to_string(geom.depth_nm) + "] nm");
}

WaveguideMode mode_propagation(const ZmwGeometry &geom, double wavelength_nm, const numerics::BesselRoot &root)
{
    if (!(wavelength_nm > 0.0))
        throw DomainError("mode_propagation: wavelength must be positive");
    const double k0 = units::wavenumber(wavelength_nm);
    WaveguideMode mode;
    mode.root = root;
    if (k0 * geom.radius_nm >= root.value)
    {
        mode.propagating = true;
        mode.kappa = 0.0;
        mode.decay_length = std::numeric_limits<double>::infinity();
        return mode;
    }
    const double cutoff = root.value / geom.radius_nm;
    mode.kappa = std::sqrt(cutoff * cutoff - k0 * k0);
    mode.decay_length = 1.0 / mode.kappa;
    return mode;
}

WaveguideMode fundamental_mode(const ZmwGeometry &geom, double wavelength_nm)
{
    return mode_propagation(geom, wavelength_nm, numerics::BesselRoot{numerics::ModeFamily::TE, 1, 1, numerics::te11_cutoff_root()});
}

double field_decay(double e0, double z_nm, double decay_length_nm)
{
    if (!(z_nm >= 0.0))
        throw DomainError("field_decay: z must be non-negative");
    if (!(decay_length_nm > 0.0))
        throw DomainError("field_decay: decay length must be positive");
    return e0 * std::exp(-z_nm / decay_length_nm);
}

std::complex<double> scattered_field_at_exit(std::complex<double> alpha, std::complex<double> c11, double e0,
                                             double z_atom_nm, double depth_nm, double decay_length_nm)
{
    if (!(z_atom_nm >= 0.0 && z_atom_nm <= depth_nm))
        throw DomainError("scattered_field_at_exit: atom must lie in [0, H]");
    if (!(decay_length_nm > 0.0))
        throw DomainError("scattered_field_at_exit: decay length must be positive");
    // Excitation reaching the atom, then the scattered mode travelling on to z = H.
    const double to_atom = std::exp(-z_atom_nm / decay_length_nm);
    const double to_exit = std::exp(-(depth_nm - z_atom_nm) / decay_length_nm);
    return c11 * alpha * (e0 * to_atom * to_exit);
}

bool is_zero_mode(const ZmwGeometry &geom, double wavelength_nm)
{
    return !fundamental_mode(geom, wavelength_nm).propagating;
}

} // namespace zmw
