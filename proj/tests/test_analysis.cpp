#include "oracles/oracles.hpp"

#include "zmw/analysis.hpp"
#include "zmw/errors.hpp"
#include "zmw/units.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace zmw;

namespace
{
const double kLambda0 = 532.0;
const double kOmega0 = units::omega_from_wavelength(kLambda0);

FanoModel make_model(complex coupling, double gamma_rel)
{
    FanoModel m;
    m.omega_tilde = kOmega0;
    m.gamma_tilde = gamma_rel * kOmega0;
    m.coupling = coupling;
    return m;
}

// Uniform in wavelength, covering omega~ +- span linewidths.
Spectrum synthesize(const FanoModel &m, std::size_t points = 400, double span = 20.0)
{
    const double lo = units::wavelength_from_omega(m.omega_tilde + span * m.gamma_tilde);
    const double hi = units::wavelength_from_omega(m.omega_tilde - span * m.gamma_tilde);
    const auto grid = linear_grid(lo, hi, points);
    return fano_spectrum(grid, m);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
} // namespace

TEST_CASE("fit closure over the parameter box")
{
    for (double A : {0.5, 2.0, 7.284, 14.57, 50.0})
        for (double g : {1e-8, 1e-6, 1e-4})
            for (std::size_t points : {200u, 801u})
            {
                CAPTURE(A);
                CAPTURE(g);
                CAPTURE(points);
                const auto m = make_model(A, g);
                const auto fit = fit_fano(synthesize(m, points));
                CHECK(fit.converged);
                CHECK(std::abs(fit.omega_tilde - m.omega_tilde) <= 1e-6 * m.gamma_tilde);
                CHECK(rel(fit.gamma_tilde, m.gamma_tilde) < 1e-6);
                CHECK(std::abs(fit.coupling - complex(A, 0.0)) < 1e-6 * A);
                CHECK(rel(fit.baseline, 1.0) < 1e-6);
                CHECK(fit.residual < 1e-6);
            }
}

TEST_CASE("fit closure with complex couplings and both signs")
{
    for (complex A : {complex(3.0, 1.0), complex(-5.0, 2.0), complex(0.0, 4.0), complex(2.0, 1.5), complex(-20.0, -3.0)})
        for (auto sign : {LineshapeSign::Retarded, LineshapeSign::Inverted})
        {
            auto m = make_model(A, 1e-6);
            m.sign = sign;
            FanoFitOptions opt;
            opt.sign = sign;
            const auto fit = fit_fano(synthesize(m), opt);
            CHECK(fit.converged);
            // Im A is only fixed up to Im A' <-> 2 - Im A' on the retarded kernel
            // coupling A' (= -A for the inverted form).
            const complex kernel_a = sign == LineshapeSign::Inverted ? -A : A;
            const complex canonical(kernel_a.real(), kernel_a.imag() > 1.0 ? 2.0 - kernel_a.imag() : kernel_a.imag());
            const complex expected = sign == LineshapeSign::Inverted ? -canonical : canonical;
            CHECK(std::abs(fit.coupling - expected) < 1e-6 * std::abs(A));
            CHECK(fit.residual < 1e-8);
            CHECK(rel(fit.gamma_tilde, m.gamma_tilde) < 1e-6);
        }
}

TEST_CASE("flat spectrum")
{
    Spectrum flat;
    for (int i = 0; i < 50; ++i)
        flat.points.push_back({530.0 + 0.1 * i, 1.0});
    const auto fit = fit_fano(flat);
    CHECK(std::abs(fit.coupling) <= 1e-10);
    CHECK(fit.baseline == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.converged);
}

TEST_CASE("noisy spectrum, seed 20240917")
{
    std::mt19937_64 rng(20240917);
    std::normal_distribution<double> noise(0.0, 0.01);
    const auto m = make_model(7.284, 1e-6);
    auto s = synthesize(m, 400);
    for (auto &p : s.points)
        p.value *= 1.0 + noise(rng);
    const auto fit = fit_fano(s);
    CHECK(rel(fit.omega_tilde, m.omega_tilde) < 0.05);
    CHECK(rel(fit.gamma_tilde, m.gamma_tilde) < 0.05);
    // Much tighter in practice: the centre lands within a few percent of a linewidth.
    CHECK(std::abs(fit.omega_tilde - m.omega_tilde) < 0.05 * m.gamma_tilde);
}

TEST_CASE("fit input checks")
{
    Spectrum few;
    for (int i = 0; i < 7; ++i)
        few.points.push_back({530.0 + i, 1.0});
    CHECK_THROWS_AS(fit_fano(few), DomainError);
    Spectrum unordered{{{2.0, 1.0}, {1.0, 1.0}, {3, 1}, {4, 1}, {5, 1}, {6, 1}, {7, 1}, {8, 1}}};
    CHECK_THROWS_AS(fit_fano(unordered), DomainError);
}

TEST_CASE("xibar extraction")
{
    FanoFitResult fit;
    fit.omega_tilde = kOmega0;
    fit.gamma_tilde = 1e-6 * kOmega0;
    fit.converged = true;
    fit.status = numerics::FitStatus::Converged;
    fit.coupling = 7.284;
    CHECK(std::abs(extract_xibar(fit, 532.0, 50.0) - 1.0) < 0.001);
    const complex x1 = extract_xibar(fit, 532.0, 50.0);
    fit.coupling *= 2.0;
    CHECK(std::abs(extract_xibar(fit, 532.0, 50.0) - 2.0 * x1) < 1e-15);

    for (double xibar : {0.1, 1.0, 2.0, 3.7, 10.0})
        for (double R : {20.0, 50.0, 80.0})
        {
            fit.coupling = fano_coupling_from_xibar(xibar, 532.0, R);
            CHECK(std::abs(extract_xibar(fit, 532.0, R) - xibar) <= 1e-12 * xibar);
        }
    fit.converged = false;
    CHECK_THROWS_AS(extract_xibar(fit, 532.0, 50.0), DomainError);
}

TEST_CASE("xibar = 2 roundtrip through a fit")
{
    const auto m = make_model(fano_coupling_from_xibar(2.0, kLambda0, 50.0), 1e-6);
    const auto fit = fit_fano(synthesize(m));
    const complex xibar = extract_xibar(fit, kLambda0, 50.0);
    CHECK(std::abs(xibar - 2.0) < 0.01);
}

TEST_CASE("spectrum metrics on a Fano spectrum")
{
    const double A = 7.284;
    const auto m = make_model(A, 1e-6);
    const auto s = synthesize(m, 2001, 30.0);
    const auto metrics = spectrum_metrics(s, 1.0);
    const auto [smax, smin] = oracle::fano_extremum_locations(A);
    const double closed_max = double(oracle::fano(A, smax));
    const double closed_min = double(oracle::fano(A, smin));
    CHECK(std::abs(metrics.peak - 55.04) < 0.1);
    CHECK(std::abs(metrics.minimum - 0.0182) < 0.0005);
    CHECK(metrics.blocking_orders >= 1.7);
    CHECK(rel(metrics.peak, closed_max) < 1e-4);
    CHECK(rel(metrics.minimum, closed_min) < 1e-3);
    const double lam_max = units::wavelength_from_omega(m.omega_tilde - double(smax) * m.gamma_tilde / 2.0);
    const double lam_min = units::wavelength_from_omega(m.omega_tilde - double(smin) * m.gamma_tilde / 2.0);
    const double dl = s.points[1].wavelength_nm - s.points[0].wavelength_nm;
    CHECK(std::abs(metrics.peak_wavelength_nm - lam_max) < dl);
    CHECK(std::abs(metrics.min_wavelength_nm - lam_min) < dl);
    CHECK(metrics.min_wavelength_nm < metrics.peak_wavelength_nm);
}

TEST_CASE("spectrum metrics on degenerate input")
{
    Spectrum flat{{{1.0, 3.0}, {2.0, 3.0}, {3.0, 3.0}}};
    const auto f = spectrum_metrics(flat);
    CHECK(f.peak == 3.0);
    CHECK(f.minimum == 3.0);
    CHECK(f.blocking_orders == 0.0);
    CHECK_FALSE(std::signbit(f.blocking_orders));
    Spectrum one{{{1.0, 0.5}}};
    const auto o = spectrum_metrics(one);
    CHECK(o.peak == 0.5);
    CHECK(o.minimum == 0.5);
    CHECK(o.peak_wavelength_nm == 1.0);
}

TEST_CASE("effective cross-section")
{
    CHECK(std::abs(effective_cross_section(55.04, 50.0) - 432300.0) < 500.0);
    CHECK(effective_cross_section(1.0, 50.0) == doctest::Approx(7853.98).epsilon(1e-6));
    CHECK(effective_cross_section(0.0, 50.0) == 0.0);
}

TEST_CASE("feasibility")
{
    const auto r = feasibility({100.0, 1.0, 26e-9, 1.443e-25});
    CHECK(r.dwell_time_s == 1e-7);
    CHECK(r.dwell_ok);
    CHECK(std::abs(r.de_broglie_nm - 4.59) < 0.01);
    CHECK(r.de_broglie_nm == doctest::Approx(6.62607015e-34 / (1.443e-25 * 1.0) * 1e9).epsilon(1e-14));
    CHECK(r.classical_ok);
    CHECK_FALSE(feasibility({40.0, 1.0, 26e-9, 1.443e-25}).classical_ok);
    for (double tau : {1e-9, 1e-8, 1e-6})
        CHECK_FALSE(feasibility({100.0, 1e6, tau, 1.443e-25}).dwell_ok);
    CHECK_THROWS_AS(feasibility({100.0, 0.0, 1e-8, 1e-25}), DomainError);
}
