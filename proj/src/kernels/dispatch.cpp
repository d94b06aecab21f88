#include "zmw/kernels/lineshape.hpp"

#include "zmw/errors.hpp"

#include <cstdlib>
#include <cstring>
#include <string>

namespace zmw::kernels
{
namespace
{
Isa detect()
{
    Isa best = Isa::Scalar;
    if (isa_available(Isa::Avx2))
        best = Isa::Avx2;
    else if (isa_available(Isa::Neon))
        best = Isa::Neon;
    if (const char *forced = std::getenv("ZMW_SIMD"))
    {
        for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon})
            if (std::strcmp(forced, to_string(isa)) == 0 && isa_available(isa))
                return isa;
    }
    return best;
}

void check_sizes(std::size_t n, std::size_t values, std::size_t jacobian)
{
    if (values < n || jacobian < n * kJacobianColumns)
        throw DomainError("lineshape kernel: output buffers too small for " + std::to_string(n) + " points");
}

[[noreturn]] void unavailable(Isa isa)
{
    throw DomainError(std::string("lineshape kernel: ISA '") + to_string(isa) + "' not available on this machine");
}
} // namespace

const char *to_string(Isa isa)
{
    switch (isa)
    {
    case Isa::Scalar:
        return "scalar";
    case Isa::Avx2:
        return "avx2";
    case Isa::Neon:
        return "neon";
    }
    return "unknown";
}

bool isa_available(Isa isa)
{
    switch (isa)
    {
    case Isa::Scalar:
        return true;
    case Isa::Avx2:
#if defined(ZMW_HAVE_AVX2)
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    case Isa::Neon:
#if defined(ZMW_HAVE_NEON)
        return true;
#else
        return false;
#endif
    }
    return false;
}

Isa active_isa()
{
    static const Isa isa = detect();
    return isa;
}

void lineshape(Isa isa, std::span<const double> x, const LineshapeParams &p, std::span<double> out)
{
    check_sizes(x.size(), out.size(), x.size() * kJacobianColumns);
    switch (isa)
    {
    case Isa::Scalar:
        scalar::lineshape(x, p, out);
        return;
    case Isa::Avx2:
#if defined(ZMW_HAVE_AVX2)
        if (isa_available(isa))
        {
            avx2::lineshape(x, p, out);
            return;
        }
#endif
        break;
    case Isa::Neon:
#if defined(ZMW_HAVE_NEON)
        neon::lineshape(x, p, out);
        return;
#endif
        break;
    }
    unavailable(isa);
}

void lineshape_jacobian(Isa isa, std::span<const double> x, const LineshapeParams &p, std::span<double> values,
                        std::span<double> jacobian)
{
    check_sizes(x.size(), values.size(), jacobian.size());
    switch (isa)
    {
    case Isa::Scalar:
        scalar::lineshape_jacobian(x, p, values, jacobian);
        return;
    case Isa::Avx2:
#if defined(ZMW_HAVE_AVX2)
        if (isa_available(isa))
        {
            avx2::lineshape_jacobian(x, p, values, jacobian);
            return;
        }
#endif
        break;
    case Isa::Neon:
#if defined(ZMW_HAVE_NEON)
        neon::lineshape_jacobian(x, p, values, jacobian);
        return;
#endif
        break;
    }
    unavailable(isa);
}

void lineshape(std::span<const double> x, const LineshapeParams &p, std::span<double> out)
{
    lineshape(active_isa(), x, p, out);
}

void lineshape_jacobian(std::span<const double> x, const LineshapeParams &p, std::span<double> values,
                        std::span<double> jacobian)
{
    lineshape_jacobian(active_isa(), x, p, values, jacobian);
}

} // namespace zmw::kernels
