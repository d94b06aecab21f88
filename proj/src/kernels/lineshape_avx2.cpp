#include "zmw/kernels/lineshape.hpp"

#include <immintrin.h>

namespace zmw::kernels::avx2
{
namespace
{
struct Broadcast
{
    __m256d center, h, hh, ar, ai, baseline, one;

    explicit Broadcast(const LineshapeParams &p)
        : center(_mm256_set1_pd(p.center)), h(_mm256_set1_pd(p.half_width)),
          hh(_mm256_set1_pd(p.half_width * p.half_width)), ar(_mm256_set1_pd(p.coupling_re)),
          ai(_mm256_set1_pd(p.coupling_im)), baseline(_mm256_set1_pd(p.baseline)), one(_mm256_set1_pd(1.0))
    {
    }
};
} // namespace

void lineshape(std::span<const double> x, const LineshapeParams &p, std::span<double> out)
{
    const std::size_t n = x.size();
    const Broadcast k(p);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
    {
        const __m256d d = _mm256_sub_pd(k.center, _mm256_loadu_pd(x.data() + i));
        const __m256d den = _mm256_add_pd(_mm256_mul_pd(d, d), k.hh);
        const __m256d lr = _mm256_div_pd(_mm256_mul_pd(k.h, d), den);
        const __m256d li = _mm256_div_pd(k.hh, den);
        const __m256d zr = _mm256_sub_pd(_mm256_mul_pd(k.ar, lr), _mm256_mul_pd(k.ai, li));
        const __m256d zi = _mm256_add_pd(_mm256_mul_pd(k.ar, li), _mm256_mul_pd(k.ai, lr));
        const __m256d wr = _mm256_add_pd(k.one, zr);
        const __m256d mag2 = _mm256_add_pd(_mm256_mul_pd(wr, wr), _mm256_mul_pd(zi, zi));
        _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(k.baseline, mag2));
    }
    for (; i < n; ++i)
        out[i] = lineshape_point(x[i], p);
}

void lineshape_jacobian(std::span<const double> x, const LineshapeParams &p, std::span<double> values,
                        std::span<double> jacobian)
{
    const std::size_t n = x.size();
    const Broadcast k(p);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d tb = _mm256_set1_pd(2.0 * p.baseline);
    const __m256d sign = _mm256_set1_pd(-0.0);
    double *col_center = jacobian.data() + kdCenter * n;
    double *col_logh = jacobian.data() + kdLogHalfWidth * n;
    double *col_ar = jacobian.data() + kdCouplingRe * n;
    double *col_ai = jacobian.data() + kdCouplingIm * n;
    double *col_b = jacobian.data() + kdBaseline * n;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
    {
        const __m256d d = _mm256_sub_pd(k.center, _mm256_loadu_pd(x.data() + i));
        const __m256d den = _mm256_add_pd(_mm256_mul_pd(d, d), k.hh);
        const __m256d lr = _mm256_div_pd(_mm256_mul_pd(k.h, d), den);
        const __m256d li = _mm256_div_pd(k.hh, den);
        const __m256d zr = _mm256_sub_pd(_mm256_mul_pd(k.ar, lr), _mm256_mul_pd(k.ai, li));
        const __m256d zi = _mm256_add_pd(_mm256_mul_pd(k.ar, li), _mm256_mul_pd(k.ai, lr));
        const __m256d wr = _mm256_add_pd(k.one, zr);
        const __m256d mag2 = _mm256_add_pd(_mm256_mul_pd(wr, wr), _mm256_mul_pd(zi, zi));
        const __m256d mr = _mm256_div_pd(_mm256_sub_pd(_mm256_mul_pd(lr, lr), _mm256_mul_pd(li, li)), k.h);
        const __m256d mi = _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(two, lr), li), k.h);
        const __m256d cr = _mm256_add_pd(_mm256_mul_pd(wr, k.ar), _mm256_mul_pd(zi, k.ai));
        const __m256d ci = _mm256_sub_pd(_mm256_mul_pd(wr, k.ai), _mm256_mul_pd(zi, k.ar));
        const __m256d re_cm = _mm256_sub_pd(_mm256_mul_pd(cr, mr), _mm256_mul_pd(ci, mi));
        _mm256_storeu_pd(col_center + i, _mm256_xor_pd(sign, _mm256_mul_pd(tb, re_cm)));
        _mm256_storeu_pd(col_logh + i, _mm256_mul_pd(tb, _mm256_mul_pd(d, re_cm)));
        _mm256_storeu_pd(col_ar + i,
                         _mm256_mul_pd(tb, _mm256_add_pd(_mm256_mul_pd(wr, lr), _mm256_mul_pd(zi, li))));
        _mm256_storeu_pd(col_ai + i,
                         _mm256_mul_pd(tb, _mm256_sub_pd(_mm256_mul_pd(zi, lr), _mm256_mul_pd(wr, li))));
        _mm256_storeu_pd(col_b + i, mag2);
        _mm256_storeu_pd(values.data() + i, _mm256_mul_pd(k.baseline, mag2));
    }
    for (; i < n; ++i)
        values[i] = lineshape_point_jacobian(x[i], p, jacobian.data() + i, n);
}
} // namespace zmw::kernels::avx2
