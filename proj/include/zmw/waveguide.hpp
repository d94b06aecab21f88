#pragma once

#include "zmw/materials.hpp"
#include "zmw/numerics/bessel.hpp"

#include <complex>

namespace zmw
{
// Cylindrical hole of radius R and depth H in a film of wall_material.
struct ZmwGeometry
{
    double radius_nm;
    double depth_nm;
    MaterialModel wall_material;

    // Throws DomainError unless radius and depth are positive.
    ZmwGeometry(double radius_nm, double depth_nm, MaterialModel wall = MaterialModel::perfect_conductor());

    double diameter_nm() const { return 2.0 * radius_nm; }
};

// z is measured from the illuminated entrance.
struct AtomPosition
{
    double x_nm = 0.0;
    double y_nm = 0.0;
    double z_nm = 0.0;

    double rho_nm() const;
};

// Throws DomainError unless x^2 + y^2 < R^2 and 0 <= z <= H.
void validate_position(const ZmwGeometry &geom, const AtomPosition &pos);

struct WaveguideMode
{
    numerics::BesselRoot root;
    double kappa = 0.0;        // nm^-1, zero when propagating
    double decay_length = 0.0; // nm, infinite when propagating
    bool propagating = false;
};

// kappa = sqrt((root/R)^2 - k0^2) below cutoff; k0 R >= root propagates.
WaveguideMode mode_propagation(const ZmwGeometry &geom, double wavelength_nm, const numerics::BesselRoot &root);

// Fundamental (least attenuated) mode, TE11.
WaveguideMode fundamental_mode(const ZmwGeometry &geom, double wavelength_nm);

// E0 e^{-z/L}.
double field_decay(double e0, double z_nm, double decay_length_nm);

// C11 alpha E0 e^{-zA/L} e^{-(H - zA)/L}: the scattered TE11 field at the exit
// plane. The product collapses to e^{-H/L}, independent of zA.
std::complex<double> scattered_field_at_exit(std::complex<double> alpha, std::complex<double> c11, double e0,
                                             double z_atom_nm, double depth_nm, double decay_length_nm);

// True iff every mode is evanescent, k0 R < z*(TE11). The cutoff itself
// counts as propagating.
bool is_zero_mode(const ZmwGeometry &geom, double wavelength_nm);

} // namespace zmw
