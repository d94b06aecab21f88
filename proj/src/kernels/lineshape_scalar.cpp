#include "zmw/kernels/lineshape.hpp"

namespace zmw::kernels::scalar
{
void lineshape(std::span<const double> x, const LineshapeParams &p, std::span<double> out)
{
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = lineshape_point(x[i], p);
}

void lineshape_jacobian(std::span<const double> x, const LineshapeParams &p, std::span<double> values,
                        std::span<double> jacobian)
{
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i)
        values[i] = lineshape_point_jacobian(x[i], p, jacobian.data() + i, n);
}
} // namespace zmw::kernels::scalar
