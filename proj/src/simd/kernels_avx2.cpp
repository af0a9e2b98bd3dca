#include "dw/simd/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace dw::simd::avx2 {
namespace {

double correction_row_sum(const CorrectionRow& r) {
    const __m256d eps_q = _mm256_set1_pd(r.eps_q);
    const __m256d n_q = _mm256_set1_pd(r.n_q);
    const __m256d weight = _mm256_set1_pd(r.occupancy_weight);
    const __m256d limit = _mm256_set1_pd(r.limit);
    const __m256d cos_q = _mm256_set1_pd(r.cos_q);
    const __m256d sin_q = _mm256_set1_pd(r.sin_q);
    const __m256d tol = _mm256_set1_pd(r.tol_eps);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d sign_mask = _mm256_set1_pd(-0.0);

    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= r.count; j += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(r.eps_p + j), eps_q);
        const __m256d inside = _mm256_cmp_pd(_mm256_andnot_pd(sign_mask, d), tol, _CMP_GT_OQ);
        const __m256d inv = _mm256_div_pd(one, d);
        const __m256d dn = _mm256_sub_pd(n_q, _mm256_loadu_pd(r.n_p + j));
        const __m256d k = _mm256_sub_pd(_mm256_mul_pd(_mm256_mul_pd(dn, inv), inv),
                                        _mm256_mul_pd(weight, inv));
        const __m256d kernel = _mm256_blendv_pd(limit, k, inside);
        const __m256d cc = _mm256_mul_pd(cos_q, _mm256_loadu_pd(r.cos_p + j));
        const __m256d ss = _mm256_mul_pd(sin_q, _mm256_loadu_pd(r.sin_p + j));
        const __m256d c2 = _mm256_mul_pd(half, _mm256_sub_pd(_mm256_add_pd(one, cc), ss));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(c2, kernel));
    }

    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    for (; j < r.count; ++j) {
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
    const __m256d vc = _mm256_set1_pd(c);
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xi = _mm256_loadu_pd(x + i);
        const __m256d yi = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(x + i, _mm256_sub_pd(_mm256_mul_pd(vc, xi), _mm256_mul_pd(vs, yi)));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_mul_pd(vs, xi), _mm256_mul_pd(vc, yi)));
    }
    for (; i < n; ++i) {
        const double xi = x[i];
        const double yi = y[i];
        x[i] = c * xi - s * yi;
        y[i] = s * xi + c * yi;
    }
}

void bond_accumulate(double* acc, const double* v, std::size_t bonds, double weight) {
    const __m256d w = _mm256_set1_pd(weight);
    std::size_t l = 0;
    for (; l + 4 <= bonds; l += 4) {
        const __m256d a = _mm256_loadu_pd(v + l);
        const __m256d b = _mm256_loadu_pd(v + l + 1);
        const __m256d prod = _mm256_mul_pd(_mm256_mul_pd(w, a), b);
        _mm256_storeu_pd(acc + l, _mm256_add_pd(_mm256_loadu_pd(acc + l), prod));
    }
    for (; l < bonds; ++l) acc[l] += weight * v[l] * v[l + 1];
}

} // namespace

const KernelTable& table() {
    static const KernelTable t{"avx2", &correction_row_sum, &givens_rotate, &bond_accumulate};
    return t;
}

} // namespace dw::simd::avx2
