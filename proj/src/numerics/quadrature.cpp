#include "dw/numerics/quadrature.hpp"

#include <algorithm>
#include <string>

namespace dw::numerics {

QuadratureGrid::QuadratureGrid(std::size_t size, double shift) {
    if (size < kMinGridSize)
        throw InvalidArgument("quadrature grid needs at least 8 points, got " + std::to_string(size));
    const double h = 2.0 * std::numbers::pi / static_cast<double>(size);
    points_.resize(size);
    for (std::size_t i = 0; i < size; ++i)
        points_[i] = -std::numbers::pi + (static_cast<double>(i) + shift) * h;
    weight_ = h;
}

std::size_t grid_size_for(double beta) {
    const double wanted = std::ceil(16.0 * beta);
    return std::max<std::size_t>(256, static_cast<std::size_t>(wanted));
}

double pairwise_sum(const double* values, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += values[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values, half) + pairwise_sum(values + half, n - half);
}

} // namespace dw::numerics
