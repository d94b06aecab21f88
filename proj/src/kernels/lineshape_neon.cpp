#include "zmw/kernels/lineshape.hpp"

#include <arm_neon.h>

namespace zmw::kernels::neon
{
namespace
{
struct Broadcast
{
    float64x2_t center, h, hh, ar, ai, baseline, one;

    explicit Broadcast(const LineshapeParams &p)
        : center(vdupq_n_f64(p.center)), h(vdupq_n_f64(p.half_width)),
          hh(vdupq_n_f64(p.half_width * p.half_width)), ar(vdupq_n_f64(p.coupling_re)),
          ai(vdupq_n_f64(p.coupling_im)), baseline(vdupq_n_f64(p.baseline)), one(vdupq_n_f64(1.0))
    {
    }
};
} // namespace

// vmulq/vaddq/vsubq only: fused multiply-add would break bit equality with
// the scalar reference.
void lineshape(std::span<const double> x, const LineshapeParams &p, std::span<double> out)
{
    const std::size_t n = x.size();
    const Broadcast k(p);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
    {
        const float64x2_t d = vsubq_f64(k.center, vld1q_f64(x.data() + i));
        const float64x2_t den = vaddq_f64(vmulq_f64(d, d), k.hh);
        const float64x2_t lr = vdivq_f64(vmulq_f64(k.h, d), den);
        const float64x2_t li = vdivq_f64(k.hh, den);
        const float64x2_t zr = vsubq_f64(vmulq_f64(k.ar, lr), vmulq_f64(k.ai, li));
        const float64x2_t zi = vaddq_f64(vmulq_f64(k.ar, li), vmulq_f64(k.ai, lr));
        const float64x2_t wr = vaddq_f64(k.one, zr);
        const float64x2_t mag2 = vaddq_f64(vmulq_f64(wr, wr), vmulq_f64(zi, zi));
        vst1q_f64(out.data() + i, vmulq_f64(k.baseline, mag2));
    }
    for (; i < n; ++i)
        out[i] = lineshape_point(x[i], p);
}

void lineshape_jacobian(std::span<const double> x, const LineshapeParams &p, std::span<double> values,
                        std::span<double> jacobian)
{
    const std::size_t n = x.size();
    const Broadcast k(p);
    const float64x2_t two = vdupq_n_f64(2.0);
    const float64x2_t tb = vdupq_n_f64(2.0 * p.baseline);
    double *col_center = jacobian.data() + kdCenter * n;
    double *col_logh = jacobian.data() + kdLogHalfWidth * n;
    double *col_ar = jacobian.data() + kdCouplingRe * n;
    double *col_ai = jacobian.data() + kdCouplingIm * n;
    double *col_b = jacobian.data() + kdBaseline * n;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
    {
        const float64x2_t d = vsubq_f64(k.center, vld1q_f64(x.data() + i));
        const float64x2_t den = vaddq_f64(vmulq_f64(d, d), k.hh);
        const float64x2_t lr = vdivq_f64(vmulq_f64(k.h, d), den);
        const float64x2_t li = vdivq_f64(k.hh, den);
        const float64x2_t zr = vsubq_f64(vmulq_f64(k.ar, lr), vmulq_f64(k.ai, li));
        const float64x2_t zi = vaddq_f64(vmulq_f64(k.ar, li), vmulq_f64(k.ai, lr));
        const float64x2_t wr = vaddq_f64(k.one, zr);
        const float64x2_t mag2 = vaddq_f64(vmulq_f64(wr, wr), vmulq_f64(zi, zi));
        const float64x2_t mr = vdivq_f64(vsubq_f64(vmulq_f64(lr, lr), vmulq_f64(li, li)), k.h);
        const float64x2_t mi = vdivq_f64(vmulq_f64(vmulq_f64(two, lr), li), k.h);
        const float64x2_t cr = vaddq_f64(vmulq_f64(wr, k.ar), vmulq_f64(zi, k.ai));
        const float64x2_t ci = vsubq_f64(vmulq_f64(wr, k.ai), vmulq_f64(zi, k.ar));
        const float64x2_t re_cm = vsubq_f64(vmulq_f64(cr, mr), vmulq_f64(ci, mi));
        vst1q_f64(col_center + i, vnegq_f64(vmulq_f64(tb, re_cm)));
        vst1q_f64(col_logh + i, vmulq_f64(tb, vmulq_f64(d, re_cm)));
        vst1q_f64(col_ar + i, vmulq_f64(tb, vaddq_f64(vmulq_f64(wr, lr), vmulq_f64(zi, li))));
        vst1q_f64(col_ai + i, vmulq_f64(tb, vsubq_f64(vmulq_f64(zi, lr), vmulq_f64(wr, li))));
        vst1q_f64(col_b + i, mag2);
        vst1q_f64(values.data() + i, vmulq_f64(k.baseline, mag2));
    }
    for (; i < n; ++i)
        values[i] = lineshape_point_jacobian(x[i], p, jacobian.data() + i, n);
}
} // namespace zmw::kernels::neon
