#include "dw/simd/kernels.hpp"

#include <cmath>

namespace dw::simd {
namespace {

double correction_row_sum(const CorrectionRow& r) {
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < r.count; ++j) {
        const double d = r.eps_p[j] - r.eps_q;
        double k;
        if (std::fabs(d) > r.tol_eps) {
            const double inv = 1.0 / d;
            k = (r.n_q - r.n_p[j]) * inv * inv - r.occupancy_weight * inv;
        } else {
            k = r.limit;
        }
        const double c2 = 0.5 * (1.0 + r.cos_q * r.cos_p[j] - r.sin_q * r.sin_p[j]);
        lane[j & 3] += c2 * k;
    }
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void givens_rotate(double* x, double* y, std::size_t n, double c, double s) {
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i];
        const double yi = y[i];
        x[i] = c * xi - s * yi;
        y[i] = s * xi + c * yi;
    }
}

void bond_accumulate(double* acc, const double* v, std::size_t bonds, double weight) {
    for (std::size_t l = 0; l < bonds; ++l) acc[l] += weight * v[l] * v[l + 1];
}

} // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{"scalar", &correction_row_sum, &givens_rotate, &bond_accumulate};
    return table;
}

} // namespace dw::simd
