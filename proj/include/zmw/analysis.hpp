#pragma once

#include "zmw/numerics/least_squares.hpp"
#include "zmw/transmission.hpp"

#include <optional>

namespace zmw
{
struct FanoFitResult
{
    double omega_tilde = 0.0; // rad/s
    double gamma_tilde = 0.0; // rad/s
    complex coupling;
    double baseline = 1.0;
    double residual = 0.0; // ||data - model||_2
    bool converged = false;
    numerics::FitStatus status = numerics::FitStatus::IterationLimit;

    double lambda_tilde_nm() const;
    FanoModel model(LineshapeSign sign = LineshapeSign::Retarded) const;
};

struct FanoFitOptions
{
    LineshapeSign sign = LineshapeSign::Retarded;
    double tolerance = 1e-12;
    int max_iterations = 200;
};

// Least-squares fit of baseline |1 + A (Gamma~/2)/((omega~ - omega) - i Gamma~/2)|^2
// with complex A. Starts from the grid argmax, argmin and their midpoint, each
// with both coupling signs, plus one start from a (centre, width) scan with the
// linear parameters solved exactly; the lowest residual wins, earliest start on
// ties. The lineshape only fixes Im A up to Im A <-> 2 - Im A (Retarded form);
// the branch with Im A <= 1 is returned. A flat spectrum returns coupling 0.
// Needs at least 8 points.
FanoFitResult fit_fano(const Spectrum &spectrum, const FanoFitOptions &options = {});

// xibar = A / ((3/16 pi^3)(lambda0/R)^3). Throws DomainError if the fit did
// not converge.
complex extract_xibar(const FanoFitResult &fit, double lambda0_nm, double radius_nm);

struct SpectrumMetrics
{
    double peak = 0.0;
    double peak_wavelength_nm = 0.0;
    double minimum = 0.0;
    double min_wavelength_nm = 0.0;
    double baseline = 1.0;        // reference used for blocking_orders
    double blocking_orders = 0.0; // -log10(minimum / baseline)
};

// Grid extrema refined by a parabola through the neighbouring points. Without
// an explicit no-atom baseline, the mean of the two end values is used.
SpectrumMetrics spectrum_metrics(const Spectrum &spectrum, std::optional<double> baseline = std::nullopt);

// peak_ratio * pi R^2, nm^2.
double effective_cross_section(double peak_ratio, double radius_nm);

struct FeasibilityInput
{
    double depth_nm = 0.0;
    double speed_m_s = 0.0;
    double lifetime_s = 0.0;
    double mass_kg = 0.0;
};

struct FeasibilityResult
{
    double dwell_time_s = 0.0;
    bool dwell_ok = false; // dwell time exceeds the radiative lifetime
    double de_broglie_nm = 0.0;
    bool classical_ok = false; // de Broglie wavelength below depth / 10
};

FeasibilityResult feasibility(const FeasibilityInput &input);

} // namespace zmw
