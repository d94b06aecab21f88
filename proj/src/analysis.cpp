#include "zmw/analysis.hpp"

#include "zmw/kernels/lineshape.hpp"
#include "zmw/units.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace zmw
{
double FanoFitResult::lambda_tilde_nm() const { return units::wavelength_from_omega(omega_tilde); }

FanoModel FanoFitResult::model(LineshapeSign sign) const
{
    FanoModel m;
    m.omega_tilde = omega_tilde;
    m.gamma_tilde = gamma_tilde;
    m.coupling = coupling;
    m.baseline = baseline;
    m.sign = sign;
    return m;
}

namespace
{
constexpr std::size_t kMinFitPoints = 8;

kernels::LineshapeParams unpack(std::span<const double> p)
{
    return {p[0], std::exp(p[1]), p[2], p[3], p[4]};
}

// For fixed centre c and half-width h the lineshape is linear in its remaining
// parameters:
//   T = b + (b (Ar^2 + (Ai - 1)^2) - b) h^2/D + 2 b Ar h d/D,  D = d^2 + h^2,
// with q = (b, b (Ar^2 + (Ai - 1)^2) - b, 2 b Ar) on the basis {1, h^2/D, h d/D}.
struct LinearPart
{
    std::array<double, 3> q{};
    double ss = std::numeric_limits<double>::infinity();
};

double det3(const double m[3][3])
{
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

std::optional<LinearPart> solve_linear_part(double c, double h, std::span<const double> u, std::span<const double> y)
{
    double m[3][3] = {}, r[3] = {};
    for (std::size_t i = 0; i < u.size(); ++i)
    {
        const double d = c - u[i];
        const double den = d * d + h * h;
        const double f[3] = {1.0, h * h / den, h * d / den};
        for (int a = 0; a < 3; ++a)
        {
            r[a] += f[a] * y[i];
            for (int b = 0; b < 3; ++b)
                m[a][b] += f[a] * f[b];
        }
    }
    const double det = det3(m);
    if (!(std::abs(det) > 0.0) || !std::isfinite(det))
        return std::nullopt;
    LinearPart part;
    for (int col = 0; col < 3; ++col)
    {
        double t[3][3];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                t[a][b] = b == col ? r[a] : m[a][b];
        part.q[col] = det3(t) / det;
    }
    part.ss = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
    {
        const double d = c - u[i];
        const double den = d * d + h * h;
        const double e = y[i] - (part.q[0] + part.q[1] * h * h / den + part.q[2] * h * d / den);
        part.ss += e * e;
    }
    return part;
}

std::optional<std::vector<double>> full_parameters(double c, double log_h, const LinearPart &part)
{
    const double b = part.q[0];
    if (!(b > 0.0))
        return std::nullopt;
    const double ar = part.q[2] / (2.0 * b);
    const double ai = 1.0 - std::sqrt(std::max(0.0, (part.q[1] + b) / b - ar * ar));
    return std::vector<double>{c, log_h, ar, ai, b};
}

// Scans (c, log h), then refines both with the linear part eliminated. The
// result does not depend on both extrema lying inside the window.
std::optional<std::vector<double>> profile_start(const std::vector<double> &u, const std::vector<double> &y,
                                                 const FanoFitOptions &options)
{
    const std::size_t n = u.size();
    const double spacing = (u.back() - u.front()) / static_cast<double>(n - 1);
    std::vector<double> centers;
    const std::size_t stride = std::max<std::size_t>(1, n / 300);
    for (std::size_t i = 0; i < n; i += stride)
        centers.push_back(u[i]);
    for (int k = 1; k <= 25; ++k)
    {
        centers.push_back(u.front() - 0.02 * k);
        centers.push_back(u.back() + 0.02 * k);
    }

    const int widths = 48;
    const double h_lo = std::log(0.5 * spacing), h_hi = std::log(2.0);
    double best_ss = std::numeric_limits<double>::infinity();
    std::array<double, 2> best{};
    for (double c : centers)
        for (int k = 0; k < widths; ++k)
        {
            const double log_h = h_lo + (h_hi - h_lo) * k / (widths - 1);
            const auto part = solve_linear_part(c, std::exp(log_h), u, y);
            if (part && part->q[0] > 0.0 && part->ss < best_ss)
            {
                best_ss = part->ss;
                best = {c, log_h};
            }
        }
    if (!std::isfinite(best_ss))
        return std::nullopt;

    numerics::FitProblem reduced;
    reduced.x = u;
    reduced.y = y;
    reduced.tolerance = options.tolerance;
    reduced.max_iterations = options.max_iterations;
    reduced.initial_guess = {best[0], best[1]};
    reduced.model = [&y](std::span<const double> p, std::span<const double> x, std::span<double> values) {
        const double h = std::exp(p[1]);
        const auto part = solve_linear_part(p[0], h, x, y);
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            if (!part)
            {
                values[i] = std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            const double d = p[0] - x[i];
            const double den = d * d + h * h;
            values[i] = part->q[0] + part->q[1] * h * h / den + part->q[2] * h * d / den;
        }
    };
    const auto refined = numerics::fit_least_squares(reduced);
    const auto &p = refined.parameters;
    if (const auto part = solve_linear_part(p[0], std::exp(p[1]), u, y))
        if (auto full = full_parameters(p[0], p[1], *part))
            return full;
    if (const auto part = solve_linear_part(best[0], std::exp(best[1]), u, y))
        return full_parameters(best[0], best[1], *part);
    return std::nullopt;
}
} // namespace

FanoFitResult fit_fano(const Spectrum &spectrum, const FanoFitOptions &options)
{
    spectrum.validate();
    const std::size_t n = spectrum.size();
    if (n < kMinFitPoints)
        throw DomainError("fit_fano: need at least 8 points, got " + std::to_string(n));

    // Abscissa: scaled angular frequency, increasing (reverse of wavelength order).
    std::vector<double> omega(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const auto &pt = spectrum.points[n - 1 - i];
        omega[i] = units::omega_from_wavelength(pt.wavelength_nm);
        y[i] = pt.value;
    }
    const double omega_mid = 0.5 * (omega.front() + omega.back());
    const double scale = 0.5 * (omega.back() - omega.front());
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i)
        u[i] = (omega[i] - omega_mid) / scale;

    const auto [min_it, max_it] = std::minmax_element(y.begin(), y.end());
    const double y_max = *max_it;
    const double y_min = *min_it;
    const double u_max = u[static_cast<std::size_t>(max_it - y.begin())];
    const double u_min = u[static_cast<std::size_t>(min_it - y.begin())];

    FanoFitResult result;
    if (y_max - y_min <= 1e-12 * std::max(std::abs(y_max), std::numeric_limits<double>::min()))
    {
        double mean = 0.0;
        for (double v : y)
            mean += v;
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (double v : y)
            ss += (v - mean) * (v - mean);
        result.omega_tilde = omega_mid;
        result.gamma_tilde = 2.0 * scale;
        result.coupling = 0.0;
        result.baseline = mean;
        result.residual = std::sqrt(ss);
        result.converged = true;
        result.status = numerics::FitStatus::Converged;
        return result;
    }

    double b0 = y_min > 0.0 ? std::sqrt(y_max * y_min) : 0.5 * (y.front() + y.back());
    if (!(b0 > 0.0))
        b0 = y_max;
    const double ratio = std::sqrt(y_max / b0);
    const double a0 = std::max(ratio - 1.0 / ratio, 1e-3);
    double h0 = std::abs(u_max - u_min) / std::sqrt(a0 * a0 + 4.0);
    const double spacing = 2.0 / static_cast<double>(n - 1);
    if (!(h0 > spacing))
        h0 = spacing;

    numerics::FitProblem problem;
    problem.x = u;
    problem.y = y;
    problem.tolerance = options.tolerance;
    problem.max_iterations = options.max_iterations;
    problem.model = [](std::span<const double> p, std::span<const double> x, std::span<double> values) {
        kernels::lineshape(x, unpack(p), values);
    };
    std::vector<double> scratch(n);
    problem.jacobian = [&scratch](std::span<const double> p, std::span<const double> x, std::span<double> jac) {
        kernels::lineshape_jacobian(x, unpack(p), scratch, jac);
    };

    std::vector<std::vector<double>> starts;
    for (double c0 : {u_max, u_min, 0.5 * (u_max + u_min)})
        for (double sign : {1.0, -1.0})
            starts.push_back({c0, std::log(h0), sign * a0, 0.0, b0});
    if (auto profiled = profile_start(u, y, options))
        starts.push_back(std::move(*profiled));

    std::optional<numerics::FitResult> best;
    for (const auto &start : starts)
    {
        problem.initial_guess = start;
        numerics::FitResult fit = numerics::fit_least_squares(problem);
        const bool better = !best || fit.residual < best->residual ||
                            (fit.residual == best->residual && fit.converged() && !best->converged());
        if (better)
            best = std::move(fit);
    }

    const auto &p = best->parameters;
    // Im A and 2 - Im A give the same lineshape; report the branch with Im A <= 1.
    complex coupling(p[2], p[3] > 1.0 ? 2.0 - p[3] : p[3]);
    if (options.sign == LineshapeSign::Inverted)
        coupling = -coupling;
    result.omega_tilde = omega_mid + p[0] * scale;
    result.gamma_tilde = 2.0 * std::exp(p[1]) * scale;
    result.coupling = coupling;
    result.baseline = p[4];
    result.residual = best->residual;
    result.status = best->status;
    result.converged = best->converged() && result.gamma_tilde > 0.0;
    return result;
}

complex extract_xibar(const FanoFitResult &fit, double lambda0_nm, double radius_nm)
{
    if (!fit.converged)
        throw DomainError("extract_xibar: fit did not converge");
    return fit.coupling / fano_coupling_from_xibar(1.0, lambda0_nm, radius_nm);
}

namespace
{
// Vertex of the parabola through three points, if it lies inside [x0, x2].
std::optional<SpectrumPoint> parabolic_vertex(const SpectrumPoint &a, const SpectrumPoint &b, const SpectrumPoint &c)
{
    const double f01 = (b.value - a.value) / (b.wavelength_nm - a.wavelength_nm);
    const double f12 = (c.value - b.value) / (c.wavelength_nm - b.wavelength_nm);
    const double curvature = (f12 - f01) / (c.wavelength_nm - a.wavelength_nm);
    if (curvature == 0.0 || !std::isfinite(curvature))
        return std::nullopt;
    const double x = 0.5 * (a.wavelength_nm + b.wavelength_nm) - f01 / (2.0 * curvature);
    if (!(x >= a.wavelength_nm && x <= c.wavelength_nm))
        return std::nullopt;
    const double value = a.value + f01 * (x - a.wavelength_nm) + curvature * (x - a.wavelength_nm) * (x - b.wavelength_nm);
    return SpectrumPoint{x, value};
}
} // namespace

SpectrumMetrics spectrum_metrics(const Spectrum &spectrum, std::optional<double> baseline)
{
    if (spectrum.points.empty())
        throw DomainError("spectrum_metrics: empty spectrum");
    const auto &pts = spectrum.points;
    std::size_t i_max = 0;
    std::size_t i_min = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
    {
        if (pts[i].value > pts[i_max].value)
            i_max = i;
        if (pts[i].value < pts[i_min].value)
            i_min = i;
    }

    SpectrumMetrics m;
    m.peak = pts[i_max].value;
    m.peak_wavelength_nm = pts[i_max].wavelength_nm;
    m.minimum = pts[i_min].value;
    m.min_wavelength_nm = pts[i_min].wavelength_nm;

    if (i_max > 0 && i_max + 1 < pts.size())
        if (auto v = parabolic_vertex(pts[i_max - 1], pts[i_max], pts[i_max + 1]); v && v->value > m.peak)
        {
            m.peak = v->value;
            m.peak_wavelength_nm = v->wavelength_nm;
        }
    if (i_min > 0 && i_min + 1 < pts.size())
        if (auto v = parabolic_vertex(pts[i_min - 1], pts[i_min], pts[i_min + 1]);
            v && v->value < m.minimum && v->value >= 0.0)
        {
            m.minimum = v->value;
            m.min_wavelength_nm = v->wavelength_nm;
        }

    m.baseline = baseline ? *baseline : 0.5 * (pts.front().value + pts.back().value);
    if (!(m.baseline > 0.0))
        m.blocking_orders = 0.0;
    else if (m.minimum <= 0.0)
        m.blocking_orders = std::numeric_limits<double>::infinity();
    else
        m.blocking_orders = -std::log10(m.minimum / m.baseline) + 0.0;
    return m;
}

double effective_cross_section(double peak_ratio, double radius_nm)
{
    if (!(peak_ratio >= 0.0))
        throw DomainError("effective_cross_section: peak ratio must be non-negative");
    if (!(radius_nm > 0.0))
        throw DomainError("effective_cross_section: radius must be positive");
    return peak_ratio * units::pi * radius_nm * radius_nm;
}

FeasibilityResult feasibility(const FeasibilityInput &in)
{
    if (!(in.depth_nm > 0.0) || !(in.speed_m_s > 0.0) || !(in.lifetime_s > 0.0) || !(in.mass_kg > 0.0))
        throw DomainError("feasibility: depth, speed, lifetime and mass must be positive");
    FeasibilityResult out;
    out.dwell_time_s = in.depth_nm / 1e9 / in.speed_m_s;
    out.dwell_ok = out.dwell_time_s > in.lifetime_s;
    out.de_broglie_nm = units::planck_constant_j_s / (in.mass_kg * in.speed_m_s) * 1e9;
    out.classical_ok = out.de_broglie_nm < in.depth_nm / 10.0;
    return out;
}

} // namespace zmw
