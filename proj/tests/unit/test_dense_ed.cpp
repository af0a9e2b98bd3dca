#include "doctest.h"

#include "dw/dense_ed.hpp"
#include "dw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

using namespace dw;
using namespace dw::ed;

TEST_CASE("size cap and symmetry are enforced") {
    CHECK_THROWS_AS(bond_operator(kMaxSites + 1), SizeCap);
    std::vector<double> m(16, 0.0);
    m[1] = m[4] = 0.5;
    CHECK_NOTHROW(SpinOperatorMatrix(2, m));
    m[4] = 0.25;
    CHECK_THROWS_AS(SpinOperatorMatrix(2, m), ContractViolation);
    CHECK_THROWS_AS(SpinOperatorMatrix(1, {0.0, 1.0, 1.0, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(SpinOperatorMatrix(2, std::vector<double>(9, 0.0)), InvalidArgument);
}

TEST_CASE("two-site chain matches the closed form") {
    // H = -(J/2)(XX + YY) - B(Z1 + Z2): levels -2B, 2B, -J, J.
    for (double B : {0.0, 0.4})
        for (double T : {0.2, 1.0}) {
            const ChainParams p(1.0, B, T);
            const double b = p.beta();
            const auto obs = thermal_observables(build_hamiltonian(Realization::clean(2), p), p);
            const double Z = 2 * std::cosh(2 * b * B) + 2 * std::cosh(b);
            CHECK(obs.lnZ == doctest::Approx(std::log(Z)).epsilon(1e-13));
            CHECK(obs.witness_signed == doctest::Approx(4 * std::sinh(b) / Z).epsilon(1e-13));
        }
}

TEST_CASE("Hamiltonian is traceless and Jacobi reproduces its spectrum") {
    const ChainParams p(1.0, 0.3, 0.5);
    const auto r = sample_realization(0.02, 0.02, 5, 1, 0);
    const auto h = build_hamiltonian(r, p);
    CHECK(std::fabs(h.trace()) < 1e-12);
    const auto eig = jacobi_eigh(h);
    double sum = 0, sumsq = 0, frob = 0;
    for (double v : eig.values) {
        sum += v;
        sumsq += v * v;
    }
    for (double v : h.data()) frob += v * v;
    CHECK(std::fabs(sum) < 1e-11);
    CHECK(sumsq == doctest::Approx(frob).epsilon(1e-12));
    // Eigenvector residual.
    const std::size_t d = h.dim();
    double worst = 0;
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t i = 0; i < d; ++i) {
            double hv = 0;
            for (std::size_t j = 0; j < d; ++j) hv += h(i, j) * eig.vectors[k * d + j];
            worst = std::max(worst, std::fabs(hv - eig.values[k] * eig.vectors[k * d + i]));
        }
    CHECK(worst < 1e-11);
}

TEST_CASE("product states never exceed the separable bound") {
    const std::size_t n = 4;
    const auto w = bond_operator(n);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = -1;
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<std::complex<double>> psi{1.0};
        for (std::size_t s = 0; s < n; ++s) {
            const double th = std::acos(1 - 2 * u(rng)), ph = 2 * M_PI * u(rng);
            const std::complex<double> up = std::cos(th / 2), dn = std::polar(std::sin(th / 2), ph);
            std::vector<std::complex<double>> next;
            for (auto a : psi) {
                next.push_back(a * up);
                next.push_back(a * dn);
            }
            psi = next;
        }
        std::vector<double> re, im;
        for (auto a : psi) {
            re.push_back(a.real());
            im.push_back(a.imag());
        }
        worst = std::max(worst, std::fabs(expectation(w, re, im)));
    }
    CHECK(worst <= 1.0 + 1e-12);
    CHECK(worst > 0.5);
}

TEST_CASE("the bond operator saturates above the bound on an entangled state") {
    // Two-site triplet (|01> + |10>)/sqrt2 gives <XX + YY> = 2.
    const auto w = bond_operator(2);
    const double s = 1 / std::sqrt(2.0);
    CHECK(expectation(w, std::vector<double>{0, s, s, 0}, std::vector<double>(4, 0.0)) == doctest::Approx(2.0));
}

TEST_CASE("two-site spectra") {
    // -(J/2)(XX + YY) splits the one-magnon pair into -J and +J.
    const auto hop = jacobi_eigh(build_hamiltonian(Realization::clean(2), ChainParams(1.0, 0.0, 1.0)));
    const std::vector<double> expect_hop{-1.0, 0.0, 0.0, 1.0};
    for (std::size_t i = 0; i < 4; ++i) CHECK(hop.values[i] == doctest::Approx(expect_hop[i]).scale(1.0));
    const auto zee = build_hamiltonian(Realization::clean(2), ChainParams(0.0, 1.0, 1.0));
    const std::vector<double> diag{-2.0, 0.0, 0.0, 2.0};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(zee(i, i) == diag[i]);
        for (std::size_t j = 0; j < 4; ++j)
            if (i != j) CHECK(zee(i, j) == 0.0);
    }
}

TEST_CASE("thermal limits") {
    const auto cold = thermal_observables(build_hamiltonian(Realization::clean(2), ChainParams(1.0, 0.0, 0.01)),
                                          ChainParams(1.0, 0.0, 0.01));
    CHECK(std::fabs(cold.witness_signed) == doctest::Approx(2.0).epsilon(1e-12));
    const ChainParams hot(1.0, 0.2, 1e8);
    const auto r = sample_realization(0.01, 0.01, 6, 2, 1);
    const auto o = thermal_observables(build_hamiltonian(r, hot), hot);
    CHECK(o.lnZ == doctest::Approx(6 * std::log(2.0)).epsilon(1e-7));
    CHECK(std::fabs(o.witness_signed) < 1e-7);
}

TEST_CASE("mirror image of a realization has the same free energy") {
    const ChainParams p(1.0, 0.3, 0.4);
    const auto r = sample_realization(0.05, 0.05, 7, 4, 2);
    Realization m = r;
    std::reverse(m.couplings.begin(), m.couplings.end());
    std::reverse(m.fields.begin(), m.fields.end());
    const auto a = thermal_observables(build_hamiltonian(r, p), p), b = thermal_observables(build_hamiltonian(m, p), p);
    CHECK(a.lnZ == doctest::Approx(b.lnZ).epsilon(1e-13));
    CHECK(a.witness_signed == doctest::Approx(b.witness_signed).epsilon(1e-12));
}
