#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference and, on x86-64,
// an AVX2 variant. Both accumulate in four interleaved lanes (element j goes to
// lane j % 4, lanes combined as (l0 + l1) + (l2 + l3)) and use no fused
// multiply-add, so the variants agree bit for bit.

#include <cstddef>
#include <string_view>

namespace dw::simd {

/// One row of the first-order correction integral at fixed outer momentum q.
struct CorrectionRow {
    double eps_q;
    double n_q;
    double occupancy_weight; // beta * n(q) * (1 - n(q))
    double limit;            // on-diagonal value of the kernel
    double cos_q;
    double sin_q;
    double tol_eps;
    const double* eps_p;
    const double* n_p;
    const double* cos_p;
    const double* sin_p;
    std::size_t count;
};

struct KernelTable {
    std::string_view name;

    /// sum_j cos^2((q+p_j)/2) * K(q, p_j), with K replaced by `limit` where
    /// |eps_p - eps_q| <= tol_eps.
    double (*correction_row_sum)(const CorrectionRow& row);

    /// Plane rotation of two rows: x <- c x - s y, y <- s x + c y.
    void (*givens_rotate)(double* x, double* y, std::size_t n, double c, double s);

    /// acc[l] += weight * v[l] * v[l+1] for l < bonds.
    void (*bond_accumulate)(double* acc, const double* v, std::size_t bonds, double weight);
};

const KernelTable& scalar_kernels();

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

/// Kernel table used by the library. Chosen once: `DW_SIMD=scalar` forces the
/// reference path, otherwise the widest supported variant wins.
const KernelTable& active_kernels();

} // namespace dw::simd
