#include "zmw/transmission.hpp"

#include "zmw/numerics/bessel.hpp"
#include "zmw/parallel.hpp"
#include "zmw/units.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace zmw
{
void FanoModel::validate() const
{
    if (!(gamma_tilde > 0.0) || !std::isfinite(gamma_tilde))
        throw DomainError("FanoModel: linewidth must be positive");
    if (!(baseline > 0.0) || !std::isfinite(baseline))
        throw DomainError("FanoModel: baseline must be positive");
    if (!std::isfinite(omega_tilde) || !std::isfinite(coupling.real()) || !std::isfinite(coupling.imag()))
        throw DomainError("FanoModel: non-finite parameter");
}

kernels::LineshapeParams FanoModel::kernel_params() const
{
    const complex a = sign == LineshapeSign::Retarded ? coupling : -coupling;
    return {omega_tilde, 0.5 * gamma_tilde, a.real(), a.imag(), baseline};
}

void Spectrum::validate() const
{
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        const auto &p = points[i];
        if (!std::isfinite(p.wavelength_nm) || !std::isfinite(p.value) || p.value < 0.0)
            throw DomainError("Spectrum: invalid point " + std::to_string(i));
        if (i > 0 && !(p.wavelength_nm > points[i - 1].wavelength_nm))
            throw DomainError("Spectrum: wavelengths not strictly increasing at point " + std::to_string(i));
    }
}

std::vector<double> Spectrum::wavelengths() const
{
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto &p : points)
        out.push_back(p.wavelength_nm);
    return out;
}

std::vector<double> Spectrum::values() const
{
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto &p : points)
        out.push_back(p.value);
    return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n)
{
    if (n < 2 || !(hi > lo))
        throw DomainError("linear_grid: need n >= 2 and hi > lo");
    std::vector<double> grid(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        grid[i] = lo + step * static_cast<double>(i);
    grid.back() = hi;
    return grid;
}

double detector_power_ratio(complex alpha, complex xi) { return std::norm(1.0 + xi * alpha); }

double reference_power(const DetectorConfig &cfg)
{
    if (!(cfg.area_nm2 > 0.0))
        throw DomainError("DetectorConfig: area must be positive");
    return cfg.reference_intensity * cfg.area_nm2;
}

double detected_power(const DetectorConfig &cfg, complex alpha)
{
    return reference_power(cfg) * detector_power_ratio(alpha, cfg.xi);
}

double fano_coupling_from_xibar(double xibar, double lambda0_nm, double radius_nm)
{
    if (!(radius_nm > 0.0))
        throw DomainError("fano_coupling_from_xibar: radius must be positive");
    const double ratio = lambda0_nm / radius_nm;
    return xibar * kFanoCouplingPrefactor * ratio * ratio * ratio;
}

double fano_transmission(double omega, const FanoModel &model)
{
    model.validate();
    return kernels::lineshape_point(omega, model.kernel_params());
}

void fano_transmission(std::span<const double> omega, const FanoModel &model, std::span<double> out)
{
    model.validate();
    kernels::lineshape(omega, model.kernel_params(), out);
}

namespace
{
std::vector<double> to_omega(std::span<const double> wavelengths_nm)
{
    std::vector<double> omega(wavelengths_nm.size());
    for (std::size_t i = 0; i < omega.size(); ++i)
    {
        if (!(wavelengths_nm[i] > 0.0))
            throw DomainError("spectrum: wavelengths must be positive");
        omega[i] = units::omega_from_wavelength(wavelengths_nm[i]);
    }
    return omega;
}

Spectrum assemble(std::span<const double> wavelengths_nm, const std::vector<double> &values)
{
    Spectrum s;
    s.points.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        s.points[i] = {wavelengths_nm[i], values[i]};
    s.validate();
    return s;
}
} // namespace

Spectrum fano_spectrum(std::span<const double> wavelengths_nm, const FanoModel &model, unsigned threads)
{
    model.validate();
    const auto omega = to_omega(wavelengths_nm);
    std::vector<double> values(omega.size());
    const auto params = model.kernel_params();
    for_each_chunk(omega.size(), threads, [&](std::size_t begin, std::size_t end) {
        kernels::lineshape(std::span(omega).subspan(begin, end - begin), params,
                           std::span(values).subspan(begin, end - begin));
    });
    return assemble(wavelengths_nm, values);
}

double pec_deep_coefficient(double omega, double radius_nm)
{
    if (!(omega > 0.0) || !(radius_nm > 0.0))
        throw DomainError("pec_deep_coefficient: omega and radius must be positive");
    const double z = numerics::te11_cutoff_root();
    const double kr = units::wavenumber_from_omega(omega) * radius_nm;
    if (kr >= z)
    {
        std::ostringstream msg;
        msg << "deep-PEC model requires the zero-mode regime k0 R < " << z << " but k0 R = " << kr;
        throw RegimeError(msg.str());
    }
    const double z2 = z * z;
    const double norm = std::pow(numerics::bessel_j(1, z), kTe11NormPower);
    return 3.0 * z2 / (2.0 * kr * (z2 - 1.0) * norm * std::sqrt(z2 - kr * kr));
}

namespace
{
FanoModel pec_model(double omega, double radius_nm, const PurcellResult &purcell, LineshapeSign sign)
{
    if (!(purcell.gamma_tilde > 0.0))
        throw DomainError("pec_deep_transmission: linewidth must be positive");
    if (std::abs(omega - purcell.omega_tilde) > 1e6 * purcell.gamma_tilde)
        throw DomainError("pec_deep_transmission: detuning exceeds 1e6 linewidths");
    FanoModel m;
    m.omega_tilde = purcell.omega_tilde;
    m.gamma_tilde = purcell.gamma_tilde;
    m.coupling = pec_deep_coefficient(omega, radius_nm);
    m.sign = sign;
    return m;
}
} // namespace

double pec_deep_transmission(double omega, double radius_nm, const PurcellResult &purcell, LineshapeSign sign)
{
    return fano_transmission(omega, pec_model(omega, radius_nm, purcell, sign));
}

Spectrum pec_deep_spectrum(std::span<const double> wavelengths_nm, double radius_nm, const PurcellResult &purcell,
                           LineshapeSign sign, unsigned threads)
{
    const auto omega = to_omega(wavelengths_nm);
    std::vector<double> values(omega.size());
    for_each_chunk(omega.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            values[i] = pec_deep_transmission(omega[i], radius_nm, purcell, sign);
    });
    return assemble(wavelengths_nm, values);
}

double off_axis_shift(double rho_nm, double radius_nm, complex eps_wall, DipoleOrientation orientation,
                      Warnings *warnings)
{
    if (!(radius_nm > 0.0) || !(rho_nm > 0.0 && rho_nm < radius_nm))
        throw DomainError("off_axis_shift: need 0 < rho < R");
    const double gap = radius_nm - rho_nm;
    if (gap < 0.25 * radius_nm)
        warn(warnings, "off_axis_shift: dipole within R/4 of the wall; the estimate diverges there");
    if (rho_nm < 0.25 * radius_nm)
        warn(warnings, "off_axis_shift: dipole within R/4 of the axis; the estimate holds far from the axis");
    const double prefactor = orientation == DipoleOrientation::PerpendicularToWall ? 0.75 : 0.375;
    const double geometric = radius_nm * radius_nm * radius_nm / (gap * gap * gap);
    return prefactor * wall_contrast(eps_wall).real() * geometric;
}

} // namespace zmw
