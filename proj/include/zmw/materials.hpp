#pragma once

#include <complex>
#include <filesystem>
#include <istream>
#include <vector>

namespace zmw
{
using complex = std::complex<double>;

// Lossless Drude law: 1 - omega_pl^2 / omega^2. Throws DomainError for omega <= 0.
complex drude_permittivity(double omega, double omega_pl);

struct PermittivityRow
{
    double wavelength_nm = 0.0;
    complex epsilon;
};

// Permittivity of the meta-atom or the waveguide wall. Construction validates
// once; lookups are const and reentrant.
class MaterialModel
{
public:
    enum class Kind
    {
        PerfectConductor,
        Drude,
        Tabulated
    };

    static MaterialModel perfect_conductor();
    static MaterialModel drude(double plasma_frequency);
    // Rows must be strictly increasing in wavelength, at least two of them.
    static MaterialModel tabulated(std::vector<PermittivityRow> rows);

    Kind kind() const { return kind_; }
    double plasma_frequency() const { return plasma_frequency_; }
    const std::vector<PermittivityRow> &table() const { return table_; }

    // Infinite real part (-inf) for a perfect conductor.
    complex permittivity(double wavelength_nm) const;

private:
    MaterialModel() = default;

    Kind kind_ = Kind::PerfectConductor;
    double plasma_frequency_ = 0.0;
    std::vector<PermittivityRow> table_;
};

// Linear interpolation of real and imaginary parts in wavelength. Throws
// RangeError naming the valid interval outside the table.
complex tabulated_permittivity(const MaterialModel &model, double wavelength_nm);

// Parses "wavelength_nm, eps_real, eps_imag" rows; '#' lines and blank lines
// are skipped. Throws DomainError with the offending line number.
MaterialModel parse_material_table(std::istream &in);
MaterialModel load_material_table(const std::filesystem::path &path);

// (eps - 1)/(eps + 1), the image-dipole strength of a planar wall; 1 for a
// perfect conductor (eps -> -inf).
complex wall_contrast(complex epsilon);

} // namespace zmw
