#include "zmw/numerics/bessel.hpp"

#include "zmw/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace zmw::numerics
{
namespace
{
constexpr double kSeriesLimit = 12.0;
constexpr double kAsymptoticLimit = 25.0;

// sum_k (-1)^k (x/2)^(n+2k) / (k! (n+k)!)
double series(int n, double x)
{
    const double half = 0.5 * x;
    const double q = -half * half;
    double term = 1.0;
    for (int i = 1; i <= n; ++i)
        term *= half / i;
    double sum = term;
    for (int k = 1; k < 200; ++k)
    {
        term *= q / (static_cast<double>(k) * (n + k));
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum))
            break;
    }
    return sum;
}

// Miller's backward recurrence normalised by J_0 + 2 sum J_2k = 1.
// Fills out[0..n] for moderate x.
void backward_recurrence(int n, double x, std::array<double, kMaxBesselOrder + 1> &out)
{
    int start = static_cast<int>(x + 30.0 + 10.0 * std::cbrt(x));
    start += start % 2;
    double next = 0.0;
    double current = 1e-300;
    double norm = 0.0;
    out.fill(0.0);
    for (int k = start; k > 0; --k)
    {
        const double previous = 2.0 * k / x * current - next;
        next = current;
        current = previous;
        if (k - 1 <= n)
            out[k - 1] = current;
        if ((k - 1) % 2 == 0 && k - 1 > 0)
            norm += 2.0 * current;
        if (std::abs(current) > 1e250)
        {
            next *= 1e-250;
            current *= 1e-250;
            norm *= 1e-250;
            for (int i = 0; i <= n; ++i)
                out[i] *= 1e-250;
        }
    }
    norm += current;
    for (int i = 0; i <= n; ++i)
        out[i] /= norm;
}

// Hankel asymptotic expansion for J_0 and J_1, valid for large x.
double hankel_asymptotic(int nu, double x)
{
    const double mu = 4.0 * nu * nu;
    const double eight_x = 8.0 * x;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double last = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 60; ++k)
    {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (k * eight_x);
        if (std::abs(term) >= last)
            break;
        last = std::abs(term);
        // Terms alternate between Q (odd k) and P (even k) with sign (-1)^floor(k/2).
        const double signed_term = ((k / 2) % 2 == 0) ? term : -term;
        if (k % 2 == 1)
            q += signed_term;
        else
            p += signed_term;
        if (last < 1e-17)
            break;
    }
    const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

void check_domain(int order, double x)
{
    if (order < 0 || order > kMaxBesselOrder)
        throw DomainError("bessel_j: unsupported order " + std::to_string(order) + " (0..10)");
    if (!(x >= 0.0) || x > kMaxBesselArgument)
        throw DomainError("bessel_j: argument " + std::to_string(x) + " outside [0, 1e4]");
}

} // namespace

double bessel_j(int order, double x)
{
    check_domain(order, x);
    if (x == 0.0)
        return order == 0 ? 1.0 : 0.0;
    if (x <= kSeriesLimit)
        return series(order, x);
    if (x < kAsymptoticLimit)
    {
        std::array<double, kMaxBesselOrder + 1> values{};
        backward_recurrence(order, x, values);
        return values[order];
    }
    // Upward recurrence is stable here since order <= 10 < x.
    double previous = hankel_asymptotic(0, x);
    if (order == 0)
        return previous;
    double current = hankel_asymptotic(1, x);
    for (int k = 1; k < order; ++k)
    {
        const double next = 2.0 * k / x * current - previous;
        previous = current;
        current = next;
    }
    return current;
}

double bessel_j_prime(int order, double x)
{
    if (order == 0)
        return -bessel_j(1, x);
    check_domain(order + 1, x);
    return 0.5 * (bessel_j(order - 1, x) - bessel_j(order + 1, x));
}

double bessel_j1_prime(double x) { return bessel_j_prime(1, x); }

double mode_characteristic(ModeFamily family, int m, double x)
{
    return family == ModeFamily::TE ? bessel_j_prime(m, x) : bessel_j(m, x);
}

namespace
{
// Derivative of the characteristic function, used for the Newton polish.
double characteristic_slope(ModeFamily family, int m, double x)
{
    if (family == ModeFamily::TM)
        return bessel_j_prime(m, x);
    // Bessel equation: J'' = -J'/x - (1 - m^2/x^2) J
    return -bessel_j_prime(m, x) / x - (1.0 - static_cast<double>(m * m) / (x * x)) * bessel_j(m, x);
}
} // namespace

BesselRoot mode_root(ModeFamily family, int m, int n, double search_limit)
{
    if (m < 0 || m > kMaxModeIndex || n < 1 || n > kMaxModeIndex)
        throw DomainError("mode_root: indices (m=" + std::to_string(m) + ", n=" + std::to_string(n) +
                          ") outside m in [0,5], n in [1,5]");

    auto f = [&](double x) { return mode_characteristic(family, m, x); };

    // Start just off the origin so the trivial zero of J_m (m >= 1) and
    // J_m' (m >= 2) is not counted.
    constexpr double step = 0.05;
    double lo = 1e-3;
    double f_lo = f(lo);
    int found = 0;
    while (lo < search_limit)
    {
        const double hi = std::min(lo + step, search_limit);
        const double f_hi = f(hi);
        if (f_lo == 0.0 || (f_lo < 0.0) != (f_hi < 0.0))
        {
            if (++found == n)
            {
                double a = lo;
                double b = hi;
                double fa = f_lo;
                while (b - a > 1e-13)
                {
                    const double mid = 0.5 * (a + b);
                    const double fm = f(mid);
                    if ((fa < 0.0) == (fm < 0.0) && fm != 0.0)
                    {
                        a = mid;
                        fa = fm;
                    }
                    else
                    {
                        b = mid;
                    }
                }
                double root = 0.5 * (a + b);
                const double slope = characteristic_slope(family, m, root);
                if (slope != 0.0)
                {
                    const double polished = root - f(root) / slope;
                    if (std::abs(polished - root) < 1e-12 && std::abs(f(polished)) <= std::abs(f(root)))
                        root = polished;
                }
                return BesselRoot{family, m, n, root};
            }
        }
        lo = hi;
        f_lo = f_hi;
    }
    throw ConvergenceError("mode_root: bracket for root " + std::to_string(n) + " of " +
                           (family == ModeFamily::TE ? "J_m'" : "J_m") + " (m=" + std::to_string(m) +
                           ") not found in (0, " + std::to_string(search_limit) + "]");
}

double te11_cutoff_root()
{
    static const double root = mode_root(ModeFamily::TE, 1, 1).value;
    return root;
}

} // namespace zmw::numerics
