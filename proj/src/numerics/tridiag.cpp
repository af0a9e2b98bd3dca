#include "dw/numerics/tridiag.hpp"

#include "dw/errors.hpp"
#include "dw/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

namespace dw::numerics {

TridiagMatrix::TridiagMatrix(std::vector<double> d, std::vector<double> e)
    : diag(std::move(d)), offdiag(std::move(e)) {
    if (diag.empty()) throw InvalidArgument("tridiagonal matrix must be non-empty");
    if (offdiag.size() + 1 != diag.size())
        throw InvalidArgument("tridiagonal matrix needs N-1 off-diagonal entries");
}

double TridiagMatrix::norm() const noexcept {
    double best = 0.0;
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
        double row = std::fabs(diag[i]);
        if (i > 0) row += std::fabs(offdiag[i - 1]);
        if (i + 1 < n) row += std::fabs(offdiag[i]);
        best = std::max(best, row);
    }
    return best;
}

namespace {

constexpr int kMaxIterationsPerValue = 60;

void check_well_formed(const TridiagMatrix& m) {
    if (m.diag.empty() || m.offdiag.size() + 1 != m.diag.size())
        throw InvalidArgument("malformed tridiagonal matrix");
}

// Implicit QL iteration on (d, e) where e[i] couples i and i+1 and e[n-1] = 0.
// When `rows` is non-null it holds n*n entries; row i accumulates column i of
// the orthogonal transformation.
void implicit_ql(std::vector<double>& d, std::vector<double>& e, double* rows) {
    const std::size_t n = d.size();
    const auto& kernels = simd::active_kernels();
    const double eps = std::numeric_limits<double>::epsilon();

    double shift_total = 0.0;
    double scale = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        int iterations = 0;
        scale = std::max(scale, std::fabs(d[l]) + std::fabs(e[l]));
        std::size_t m = l;
        while (m + 1 < n && std::fabs(e[m]) > eps * scale) ++m;

        if (m > l) {
            do {
                if (++iterations > kMaxIterationsPerValue)
                    throw EigenConvergence("QL iteration did not converge for eigenvalue " +
                                           std::to_string(l));
                // Wilkinson-style shift from the leading 2x2 block.
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                shift_total += h;

                p = d[m];
                double c = 1.0, c2 = 1.0, c3 = 1.0;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t ii = m; ii-- > l;) {
                    const std::size_t i = ii;
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if (rows) kernels.givens_rotate(rows + i * n, rows + (i + 1) * n, n, c, s);
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::fabs(e[l]) > eps * scale);
        }
        d[l] += shift_total;
        e[l] = 0.0;
    }
}

// LU factorisation with partial pivoting of (T - lambda I), LAPACK dgttrf layout.
struct ShiftedLU {
    std::vector<double> dl, d, du, du2;
    std::vector<std::uint8_t> swapped;

    ShiftedLU(const TridiagMatrix& m, double lambda, double tiny) {
        const std::size_t n = m.size();
        d.resize(n);
        dl.assign(n > 0 ? n - 1 : 0, 0.0);
        du.assign(n > 0 ? n - 1 : 0, 0.0);
        du2.assign(n > 1 ? n - 2 : 0, 0.0);
        swapped.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) d[i] = m.diag[i] - lambda;
        for (std::size_t i = 0; i + 1 < n; ++i) dl[i] = du[i] = m.offdiag[i];

        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::fabs(d[i]) >= std::fabs(dl[i])) {
                if (d[i] == 0.0) d[i] = tiny;
                const double f = dl[i] / d[i];
                dl[i] = f;
                d[i + 1] -= f * du[i];
            } else {
                const double f = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = f;
                const double t = du[i];
                du[i] = d[i + 1];
                d[i + 1] = t - f * d[i + 1];
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -f * du[i + 1];
                }
                swapped[i] = 1;
            }
        }
        if (n > 0 && d[n - 1] == 0.0) d[n - 1] = tiny;
        for (double& x : d)
            if (std::fabs(x) < tiny) x = std::copysign(tiny, x);
    }

    void solve(std::vector<double>& b) const {
        const std::size_t n = d.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (swapped[i]) {
                const double t = b[i];
                b[i] = b[i + 1];
                b[i + 1] = t - dl[i] * b[i];
            } else {
                b[i + 1] -= dl[i] * b[i];
            }
        }
        b[n - 1] /= d[n - 1];
        if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        for (std::size_t ii = n >= 2 ? n - 2 : 0; ii-- > 0;)
            b[ii] = (b[ii] - du[ii] * b[ii + 1] - du2[ii] * b[ii + 2]) / d[ii];
    }
};

double normalize(std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    const double norm = std::sqrt(s);
    for (double& x : v) x /= norm;
    return norm;
}

EigenSystem inverse_iteration(const TridiagMatrix& m, std::vector<double> values) {
    const std::size_t n = m.size();
    EigenSystem out;
    out.values = std::move(values);
    out.vectors.assign(n * n, 0.0);

    const double norm = std::max(m.norm(), std::numeric_limits<double>::min());
    const double eps = std::numeric_limits<double>::epsilon();
    const double cluster_gap = 1e-3 * norm;
    const double tiny = eps * norm;

    std::vector<double> x(n);
    std::size_t cluster_start = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0 && out.values[k] - out.values[k - 1] > cluster_gap) cluster_start = k;

        // Coincident shifts inside a cluster would produce identical vectors.
        double lambda = out.values[k];
        if (k > cluster_start && lambda - out.values[k - 1] < 10.0 * tiny)
            lambda = out.values[k - 1] + 10.0 * tiny;

        const ShiftedLU lu(m, lambda, tiny);
        // Deterministic, non-degenerate start vector.
        for (std::size_t i = 0; i < n; ++i)
            x[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + 1.3 * static_cast<double>(k));

        for (int iter = 0; iter < 3; ++iter) {
            lu.solve(x);
            for (std::size_t j = cluster_start; j < k; ++j) {
                const double* v = out.vectors.data() + j * n;
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) dot += v[i] * x[i];
                for (std::size_t i = 0; i < n; ++i) x[i] -= dot * v[i];
            }
            normalize(x);
        }
        std::copy(x.begin(), x.end(), out.vectors.begin() + static_cast<std::ptrdiff_t>(k * n));
    }
    return out;
}

} // namespace

std::vector<double> tridiag_eigvals(const TridiagMatrix& m) {
    check_well_formed(m);
    std::vector<double> d = m.diag;
    std::vector<double> e(m.offdiag);
    e.push_back(0.0);
    implicit_ql(d, e, nullptr);
    std::sort(d.begin(), d.end());
    return d;
}

EigenSystem tridiag_eigh(const TridiagMatrix& m, EigenMethod method) {
    check_well_formed(m);
    if (method == EigenMethod::InverseIteration) return inverse_iteration(m, tridiag_eigvals(m));

    const std::size_t n = m.size();
    std::vector<double> d = m.diag;
    std::vector<double> e(m.offdiag);
    e.push_back(0.0);
    std::vector<double> rows(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) rows[i * n + i] = 1.0;
    implicit_ql(d, e, rows.data());

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    // rows[i] holds column i of the accumulated rotation product: the eigenvector of d[i].
    EigenSystem out;
    out.values.resize(n);
    out.vectors.resize(n * n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = d[order[k]];
        std::copy_n(rows.begin() + static_cast<std::ptrdiff_t>(order[k] * n), n,
                    out.vectors.begin() + static_cast<std::ptrdiff_t>(k * n));
    }
    return out;
}

} // namespace dw::numerics
