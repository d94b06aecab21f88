#pragma once

#include <cstddef>
#include <span>

// Fano lineshape kernels. Every variant performs the same IEEE operations in
// the same order as lineshape_point/lineshape_point_jacobian, so scalar and
// SIMD results are bit-identical.
namespace zmw::kernels
{
// T(x) = baseline * |1 + A h / ((center - x) - i h)|^2 with A = (coupling_re,
// coupling_im) and h = half_width > 0.
struct LineshapeParams
{
    double center = 0.0;
    double half_width = 1.0;
    double coupling_re = 0.0;
    double coupling_im = 0.0;
    double baseline = 1.0;
};

// Jacobian columns, in order.
inline constexpr std::size_t kJacobianColumns = 5;
enum JacobianColumn : std::size_t
{
    kdCenter = 0,
    kdLogHalfWidth = 1, // h * dT/dh
    kdCouplingRe = 2,
    kdCouplingIm = 3,
    kdBaseline = 4,
};

inline double lineshape_point(double x, const LineshapeParams &p)
{
    const double d = p.center - x;
    const double h = p.half_width;
    const double den = d * d + h * h;
    const double lr = (h * d) / den;
    const double li = (h * h) / den;
    const double zr = p.coupling_re * lr - p.coupling_im * li;
    const double zi = p.coupling_re * li + p.coupling_im * lr;
    const double wr = 1.0 + zr;
    return p.baseline * (wr * wr + zi * zi);
}

// Writes T(x) and the five partial derivatives; jac has stride `stride`.
inline double lineshape_point_jacobian(double x, const LineshapeParams &p, double *jac, std::size_t stride)
{
    const double d = p.center - x;
    const double h = p.half_width;
    const double den = d * d + h * h;
    const double lr = (h * d) / den;
    const double li = (h * h) / den;
    const double ar = p.coupling_re;
    const double ai = p.coupling_im;
    const double zr = ar * lr - ai * li;
    const double zi = ar * li + ai * lr;
    const double wr = 1.0 + zr;
    const double mag2 = wr * wr + zi * zi;
    // dL/dd = -L^2/h, h dL/dh = d L^2/h
    const double mr = (lr * lr - li * li) / h;
    const double mi = ((2.0 * lr) * li) / h;
    // conj(1 + A L) * A
    const double cr = wr * ar + zi * ai;
    const double ci = wr * ai - zi * ar;
    const double re_cm = cr * mr - ci * mi;
    const double tb = 2.0 * p.baseline;
    jac[kdCenter * stride] = -(tb * re_cm);
    jac[kdLogHalfWidth * stride] = tb * (d * re_cm);
    jac[kdCouplingRe * stride] = tb * (wr * lr + zi * li);
    jac[kdCouplingIm * stride] = tb * (zi * lr - wr * li);
    jac[kdBaseline * stride] = mag2;
    return p.baseline * mag2;
}

enum class Isa
{
    Scalar,
    Avx2,
    Neon
};

const char *to_string(Isa isa);

// Compiled in and supported by the running CPU.
bool isa_available(Isa isa);

// Widest available ISA, unless ZMW_SIMD=scalar|avx2|neon names an available one.
Isa active_isa();

// out[i] = T(x[i]).
void lineshape(std::span<const double> x, const LineshapeParams &p, std::span<double> out);
void lineshape(Isa isa, std::span<const double> x, const LineshapeParams &p, std::span<double> out);

// values[i] = T(x[i]); jacobian is column-major, 5 columns of x.size().
void lineshape_jacobian(std::span<const double> x, const LineshapeParams &p, std::span<double> values,
                        std::span<double> jacobian);
void lineshape_jacobian(Isa isa, std::span<const double> x, const LineshapeParams &p, std::span<double> values,
                        std::span<double> jacobian);

namespace scalar
{
void lineshape(std::span<const double> x, const LineshapeParams &p, std::span<double> out);
void lineshape_jacobian(std::span<const double> x, const LineshapeParams &p, std::span<double> values,
                        std::span<double> jacobian);
} // namespace scalar

namespace avx2
{
void lineshape(std::span<const double> x, const LineshapeParams &p, std::span<double> out);
void lineshape_jacobian(std::span<const double> x, const LineshapeParams &p, std::span<double> values,
                        std::span<double> jacobian);
} // namespace avx2

namespace neon
{
void lineshape(std::span<const double> x, const LineshapeParams &p, std::span<double> out);
void lineshape_jacobian(std::span<const double> x, const LineshapeParams &p, std::span<double> values,
                        std::span<double> jacobian);
} // namespace neon

} // namespace zmw::kernels
