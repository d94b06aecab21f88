#pragma once

#include <compare>

namespace zmw::numerics
{
inline constexpr int kMaxBesselOrder = 10;
inline constexpr double kMaxBesselArgument = 1e4;

// Cylindrical Bessel function of the first kind J_n(x), 0 <= n <= 10,
// 0 <= x <= 1e4. Throws DomainError outside that range.
double bessel_j(int order, double x);

// J_m'(x) = (J_{m-1}(x) - J_{m+1}(x)) / 2, with J_0' = -J_1.
double bessel_j_prime(int order, double x);

// J_1'(x); equals J_0(x) - J_1(x)/x for x > 0 and 1/2 at the origin.
double bessel_j1_prime(double x);

enum class ModeFamily
{
    TE,
    TM
};

// n-th positive zero of J_m' (TE) or J_m (TM). The trivial zero at x = 0 is
// never counted.
struct BesselRoot
{
    ModeFamily family = ModeFamily::TE;
    int azimuthal_index = 0;
    int radial_index = 1;
    double value = 0.0;

    auto operator<=>(const BesselRoot &) const = default;
};

inline constexpr int kMaxModeIndex = 5;
inline constexpr double kRootSearchLimit = 30.0;

// Cutoff root for the (family, m, n) cylindrical-waveguide mode, m <= 5,
// 1 <= n <= 5. Bracketed by a scan over (0, search_limit], bisected to a
// width of 1e-13 and polished with one Newton step. Throws ConvergenceError
// when fewer than n sign changes lie below search_limit.
BesselRoot mode_root(ModeFamily family, int m, int n, double search_limit = kRootSearchLimit);

// z* = first zero of J_1', the TE11 cutoff root; computed once.
double te11_cutoff_root();

// Function whose zeros define the mode family: J_m' for TE, J_m for TM.
double mode_characteristic(ModeFamily family, int m, double x);

} // namespace zmw::numerics
