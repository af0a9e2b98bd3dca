#include "doctest.h"

#include "dw/errors.hpp"
#include "dw/numerics/level_set.hpp"
#include "dw/numerics/quadrature.hpp"
#include "dw/numerics/stats.hpp"
#include "dw/numerics/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace dw;
using namespace dw::numerics;

TEST_CASE("quadrature grids") {
    CHECK_THROWS_AS(QuadratureGrid(4), InvalidArgument);
    const auto mid = QuadratureGrid::midpoint(16);
    CHECK(mid.weight() == doctest::Approx(2 * std::numbers::pi / 16));
    CHECK(mid[0] == doctest::Approx(-std::numbers::pi + 0.5 * mid.weight()));
    const auto off = QuadratureGrid::offset(16);
    // Offset nodes sit halfway between midpoints, so no node equals +-q.
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 0; j < 16; ++j) {
            CHECK(std::fabs(mid[i] - off[j]) > 0.25 * mid.weight());
            CHECK(std::fabs(mid[i] + off[j]) > 0.25 * mid.weight());
        }
    CHECK(grid_size_for(1.0) == 256);
    CHECK(grid_size_for(100.0) == 1600);
}

TEST_CASE("periodic integrals converge spectrally") {
    // int exp(cos q) dq = 2 pi I0(1)
    const double exact = 2 * std::numbers::pi * std::cyl_bessel_i(0.0, 1.0);
    CHECK(periodic_integral([](double q) { return std::exp(std::cos(q)); }, 16) == doctest::Approx(exact).epsilon(1e-14));
    CHECK(periodic_integral([](double q) { return std::cos(q) * std::cos(q); }, 8) == doctest::Approx(std::numbers::pi));
    CHECK_THROWS_AS(periodic_integral([](double q) { return 1.0 / (q - q); }, 8), NonFiniteIntegrand);
}

TEST_CASE("pairwise sum is exact on representable data and order-fixed") {
    std::vector<double> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
    CHECK(pairwise_sum(v) == 999.0 * 1000.0 / 2.0);
    CHECK(pairwise_sum(nullptr, 0) == 0.0);
}

TEST_CASE("patched double integral uses the limit on the diagonal band") {
    // kernel (e(p) - e(q)) / (e(p) - e(q)) is 1 off the diagonal; the limit is also 1.
    auto energy = [](double q) { return std::cos(q); };
    auto kernel = [&](double q, double p) { return (energy(p) - energy(q)) / (energy(p) - energy(q)); };
    const auto r = double_integral_patched(kernel, [](double) { return 1.0; }, energy, 32, 32, 1e-6);
    CHECK(r.outer == doctest::Approx(4 * std::numbers::pi * std::numbers::pi));
    auto bad = [](double, double) { return NAN; };
    CHECK_THROWS_AS(double_integral_patched(bad, [](double) { return 0.0; }, energy, 16, 16), SingularKernel);
}

namespace {

TridiagMatrix random_tridiag(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<double> d(n), e(n - 1);
    for (auto& x : d) x = g(rng);
    for (auto& x : e) x = 1.0 + 0.3 * g(rng);
    return {d, e};
}

double residual(const TridiagMatrix& m, const EigenSystem& es) {
    const std::size_t n = m.size();
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto v = es.vector(k);
        for (std::size_t i = 0; i < n; ++i) {
            double mv = m.diag[i] * v[i];
            if (i > 0) mv += m.offdiag[i - 1] * v[i - 1];
            if (i + 1 < n) mv += m.offdiag[i] * v[i + 1];
            worst = std::max(worst, std::fabs(mv - es.values[k] * v[i]));
        }
    }
    return worst;
}

double orthogonality(const EigenSystem& es) {
    const std::size_t n = es.size();
    double worst = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += es.vector(a)[i] * es.vector(b)[i];
            worst = std::max(worst, std::fabs(dot - (a == b ? 1.0 : 0.0)));
        }
    return worst;
}

} // namespace

TEST_CASE("clean hopping chain has cosine eigenvalues") {
    const std::size_t n = 40;
    const TridiagMatrix m(std::vector<double>(n, 0.0), std::vector<double>(n - 1, -1.0));
    const auto vals = tridiag_eigvals(m);
    std::vector<double> exact(n);
    for (std::size_t k = 1; k <= n; ++k) exact[k - 1] = -2.0 * std::cos(std::numbers::pi * k / (n + 1.0));
    std::sort(exact.begin(), exact.end());
    for (std::size_t k = 0; k < n; ++k) CHECK(vals[k] == doctest::Approx(exact[k]).epsilon(1e-13).scale(1.0));
}

TEST_CASE("both eigen methods give orthonormal eigenpairs") {
    for (std::size_t n : {1u, 2u, 3u, 17u, 120u}) {
        const auto m = n == 1 ? TridiagMatrix({0.3}, {}) : random_tridiag(n, 11 + static_cast<unsigned>(n));
        for (auto method : {EigenMethod::QL, EigenMethod::InverseIteration}) {
            const auto es = tridiag_eigh(m, method);
            CHECK(std::is_sorted(es.values.begin(), es.values.end()));
            CHECK(residual(m, es) < 1e-11 * std::max(1.0, m.norm()));
            CHECK(orthogonality(es) < 1e-11);
        }
        const auto a = tridiag_eigh(m, EigenMethod::QL), b = tridiag_eigh(m, EigenMethod::InverseIteration);
        for (std::size_t k = 0; k < n; ++k) CHECK(a.values[k] == b.values[k]);
    }
}

TEST_CASE("inverse iteration handles exact degeneracy") {
    // Two decoupled identical blocks: every eigenvalue is doubled.
    const TridiagMatrix m({0.0, 0.0, 0.0, 0.0}, {1.0, 0.0, 1.0});
    const auto es = tridiag_eigh(m, EigenMethod::InverseIteration);
    CHECK(orthogonality(es) < 1e-12);
    CHECK(residual(m, es) < 1e-12);
}

TEST_CASE("log-sum-exp weights survive huge log partition functions") {
    const std::vector<double> logs{1e5, 1e5 + std::log(3.0)};
    const auto w = logsumexp_weights(logs);
    CHECK(w[0] == doctest::Approx(0.25));
    CHECK(w[1] == doctest::Approx(0.75));
    CHECK(logsumexp(logs) == doctest::Approx(1e5 + std::log(4.0)));
    CHECK(effective_sample_size(w) == doctest::Approx(1.0 / (0.0625 + 0.5625)));
    CHECK_THROWS_AS(logsumexp_weights(std::vector<double>{}), EmptyInput);
}

TEST_CASE("jackknife of the plain mean equals the textbook standard error") {
    const std::vector<double> x{1.0, 2.0, 4.0, 7.0, 11.0};
    const auto r = jackknife_mean(x);
    double mean = 0, ss = 0;
    for (double v : x) mean += v / 5;
    for (double v : x) ss += (v - mean) * (v - mean);
    CHECK(r.mean == doctest::Approx(mean));
    CHECK(r.std_err == doctest::Approx(std::sqrt(ss / (5.0 * 4.0))));
}

TEST_CASE("weighted jackknife reduces to the plain one for uniform weights") {
    const std::vector<double> x{0.5, -1.0, 2.0, 3.5, 0.0, 1.0};
    const std::vector<double> w(6, 1.0 / 6.0);
    const auto a = jackknife_mean(x), b = jackknife_weighted_mean(x, w), c = jackknife_weighted_mean_blocked(x, w, 1);
    CHECK(b.mean == doctest::Approx(a.mean));
    CHECK(b.std_err == doctest::Approx(a.std_err));
    CHECK(c.std_err == doctest::Approx(a.std_err));
    // Perfectly anticorrelated pairs have zero blocked variance.
    const std::vector<double> anti{1.0, -1.0, 2.0, -2.0, 0.5, -0.5};
    CHECK(jackknife_weighted_mean_blocked(anti, w, 2).std_err == doctest::Approx(0.0));
}

TEST_CASE("marching squares traces a circle") {
    const std::size_t n = 81;
    std::vector<double> xs(n), ys(n), v(n * n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = ys[i] = -1.0 + 2.0 * i / (n - 1.0);
    for (std::size_t iy = 0; iy < n; ++iy)
        for (std::size_t ix = 0; ix < n; ++ix) v[iy * n + ix] = 2.0 - (xs[ix] * xs[ix] + ys[iy] * ys[iy]) / 0.25;
    const auto segs = extract_level_set(xs, ys, v, 1.0); // radius 0.5
    CHECK(!segs.empty());
    double length = 0;
    for (const auto& s : segs) {
        CHECK(std::hypot(s.x0, s.y0) == doctest::Approx(0.5).epsilon(2e-3));
        length += std::hypot(s.x1 - s.x0, s.y1 - s.y0);
    }
    CHECK(length == doctest::Approx(std::numbers::pi).epsilon(2e-3));
    CHECK_THROWS_AS(extract_level_set(std::vector<double>{0.0}, ys, std::vector<double>(n, 0.0)), GridTooSmall);
}

TEST_CASE("marching squares on a field that never crosses the level") {
    const std::vector<double> xs{0, 1, 2}, ys{0, 1};
    CHECK(extract_level_set(xs, ys, std::vector<double>(6, 0.5)).empty());
    CHECK(extract_level_set(xs, ys, std::vector<double>(6, 1.0)).empty());
}

TEST_CASE("quadrature hand examples") {
    CHECK(std::fabs(periodic_integral([](double q) { return std::cos(q) * std::cos(q); }, 64) - std::numbers::pi) <=
          1e-12);
    CHECK(std::fabs(periodic_integral([](double q) { return std::cos(q); }, 16)) <= 1e-14);
    auto energy = [](double q) { return 2 * std::cos(q); };
    const auto one = double_integral_patched([](double, double) { return 1.0; }, [](double) { return 1.0; }, energy, 64, 64);
    CHECK(std::fabs(one.outer - 4 * std::numbers::pi * std::numbers::pi) <= 1e-12);
    const auto odd = double_integral_patched([](double q, double p) { return std::cos(q) * std::cos(p); },
                                             [](double q) { return std::cos(q) * std::cos(q); }, energy, 64, 64);
    CHECK(std::fabs(odd.outer) <= 1e-12);
}

TEST_CASE("small tridiagonal spectra by hand") {
    const auto two = tridiag_eigvals(TridiagMatrix({0.0, 0.0}, {-1.0}));
    CHECK(two[0] == doctest::Approx(-1.0));
    CHECK(two[1] == doctest::Approx(1.0));
    const double a = 0.7, b = -0.4;
    const auto three = tridiag_eigvals(TridiagMatrix({a, a, a}, {b, b}));
    const double r = std::fabs(b) * std::sqrt(2.0);
    CHECK(three[0] == doctest::Approx(a - r));
    CHECK(three[1] == doctest::Approx(a));
    CHECK(three[2] == doctest::Approx(a + r));
}

TEST_CASE("log-sum-exp weights by hand") {
    for (double w : logsumexp_weights(std::vector<double>{0, 0, 0})) CHECK(w == doctest::Approx(1.0 / 3));
    for (double w : logsumexp_weights(std::vector<double>{1000, 1000})) CHECK(w == 0.5);
    const auto w = logsumexp_weights(std::vector<double>{0.0, std::log(3.0)});
    CHECK(w[0] == doctest::Approx(0.25));
    CHECK(w[1] == doctest::Approx(0.75));
}

TEST_CASE("planar field gives a vertical level line") {
    const std::size_t nx = 21, ny = 11;
    std::vector<double> xs(nx), ys(ny), v(nx * ny);
    for (std::size_t i = 0; i < nx; ++i) xs[i] = 2.0 * i / (nx - 1.0) + 0.013;
    for (std::size_t j = 0; j < ny; ++j) ys[j] = j / (ny - 1.0);
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) v[j * nx + i] = xs[i];
    const auto segs = extract_level_set(xs, ys, v, 1.0);
    CHECK(segs.size() == ny - 1);
    for (const auto& s : segs) {
        CHECK(s.x0 == doctest::Approx(1.0));
        CHECK(s.x1 == doctest::Approx(1.0));
    }
}
