#pragma once

// Reference values computed independently of the library: long-double power
// series, plain bisection, brute-force scans and closed forms typed out from
// the underlying formulas.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <utility>

namespace oracle
{
using real = long double;

inline constexpr real pi = 3.141592653589793238462643383279502884L;
inline constexpr real c_nm_s = 2.99792458e17L;

// sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!)
inline real bessel_j(int n, real x)
{
    real term = 1.0L;
    for (int i = 1; i <= n; ++i)
        term *= (x / 2.0L) / i;
    real sum = term;
    for (int k = 1; k < 200; ++k)
    {
        term *= -(x / 2.0L) * (x / 2.0L) / (static_cast<real>(k) * (k + n));
        sum += term;
        if (std::fabs(term) < 1e-30L * (1.0L + std::fabs(sum)))
            break;
    }
    return sum;
}

// Bessel integral (1/pi) int_0^pi cos(n t - x sin t) dt by the trapezoid rule,
// which converges geometrically for this periodic integrand once the node count
// exceeds x + n by a margin.
inline real bessel_j_integral(int n, real x)
{
    const int nodes = 2 * static_cast<int>(x + n) + 200;
    real sum = 0.0L;
    for (int i = 0; i <= nodes; ++i)
    {
        const real t = pi * i / nodes;
        const real w = (i == 0 || i == nodes) ? 0.5L : 1.0L;
        sum += w * std::cos(n * t - x * std::sin(t));
    }
    return sum / nodes;
}

// Term-by-term derivative of the same series.
inline real bessel_j_prime(int n, real x)
{
    if (x == 0.0L)
        return n == 1 ? 0.5L : 0.0L;
    real sum = 0.0L;
    real term = 1.0L;
    for (int i = 1; i <= n; ++i)
        term *= (x / 2.0L) / i;
    for (int k = 0; k < 200; ++k)
    {
        if (k > 0)
            term *= -(x / 2.0L) * (x / 2.0L) / (static_cast<real>(k) * (k + n));
        const real d = term * (2 * k + n) / x;
        sum += d;
        if (k > 2 && std::fabs(d) < 1e-30L * (1.0L + std::fabs(sum)))
            break;
    }
    return sum;
}

inline real bisect(const std::function<real(real)> &f, real a, real b, real width = 1e-15L)
{
    real fa = f(a);
    while (b - a > width)
    {
        const real m = 0.5L * (a + b);
        const real fm = f(m);
        if ((fm < 0) == (fa < 0))
        {
            a = m;
            fa = fm;
        }
        else
        {
            b = m;
        }
    }
    return 0.5L * (a + b);
}

// n-th sign change of f on (from, to], located on a fine scan and bisected.
inline real nth_zero(const std::function<real(real)> &f, int n, real from = 1e-3L, real to = 30.0L,
                     real step = 1e-3L)
{
    real a = from;
    real fa = f(a);
    int seen = 0;
    for (real b = from + step; b <= to; b += step)
    {
        const real fb = f(b);
        if ((fa < 0) != (fb < 0))
        {
            if (++seen == n)
                return bisect(f, a, b);
        }
        a = b;
        fa = fb;
    }
    return std::nanl("");
}

inline real te_root(int m, int n)
{
    return nth_zero([m](real x) { return bessel_j_prime(m, x); }, n);
}
inline real tm_root(int m, int n)
{
    return nth_zero([m](real x) { return bessel_j(m, x); }, n);
}

// |1 + A/(s + i)|^2 = ((s + A)^2 + 1)/(s^2 + 1), s = detuning in half-widths.
inline real fano(real A, real s) { return ((s + A) * (s + A) + 1.0L) / (s * s + 1.0L); }

struct Extrema
{
    real max;
    real argmax;
    real min;
    real argmin;
};

// Brute-force scan of s over [-span, span] with `points` samples.
inline Extrema fano_scan(real A, std::size_t points = 1000000, real span = 0.0L)
{
    if (span == 0.0L)
        span = 4.0L * (std::fabs(A) + 2.0L);
    Extrema e{-1.0L, 0.0L, 1e300L, 0.0L};
    for (std::size_t i = 0; i < points; ++i)
    {
        const real s = -span + 2.0L * span * i / (points - 1);
        const real v = fano(A, s);
        if (v > e.max)
            e = {v, s, e.min, e.argmin};
        if (v < e.min)
            e = {e.max, e.argmax, v, s};
    }
    return e;
}

// Extremum locations: roots of s^2 + A s - 1 = 0.
inline std::pair<real, real> fano_extremum_locations(real A)
{
    const real r = std::sqrt(A * A + 4.0L);
    return {(-A + r) / 2.0L, (-A - r) / 2.0L};
}

// A = xibar * 3/(16 pi^3) * (lambda/R)^3
inline real fano_coupling(real xibar, real lambda, real R)
{
    const real q = lambda / R;
    return xibar * 3.0L / (16.0L * pi * pi * pi) * q * q * q;
}

inline real te11_root() { return te_root(1, 1); }

// 3 z^2 / (2 k0R (z^2 - 1) J1(z)^2 sqrt(z^2 - (k0R)^2))
inline real pec_coefficient(real lambda, real R)
{
    const real z = te11_root();
    const real kr = 2.0L * pi / lambda * R;
    const real j1 = bessel_j(1, z);
    return 3.0L * z * z / (2.0L * kr * (z * z - 1.0L) * j1 * j1 * std::sqrt(z * z - kr * kr));
}

inline real decay_length(real R, real lambda)
{
    const real z = te11_root();
    const real k = 2.0L * pi / lambda;
    return 1.0L / std::sqrt(z * z / (R * R) - k * k);
}
} // namespace oracle
