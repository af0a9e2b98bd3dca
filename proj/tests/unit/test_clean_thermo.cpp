#include "doctest.h"

#include "dw/clean_thermo.hpp"
#include "dw/errors.hpp"

#include <cmath>
#include <numbers>

using namespace dw;

TEST_CASE("zero-temperature closed forms") {
    CHECK(zeroT_critical_field(1.0) == doctest::Approx(0.61899).epsilon(1e-5 / 0.61899));
    CHECK(zeroT_critical_field(2.0) == doctest::Approx(2.0 * zeroT_critical_field(1.0)));
    CHECK(zeroT_clean_witness(0.0, 1.0) == doctest::Approx(4.0 / std::numbers::pi));
    CHECK(zeroT_clean_witness(zeroT_critical_field(1.0), 1.0) == doctest::Approx(1.0));
    CHECK(zeroT_clean_witness(1.2, 1.0) == 0.0);
}

TEST_CASE("low-temperature quadrature approaches the closed form") {
    for (double B : {0.0, 0.3, 0.6}) {
        const double w = clean_witness(ChainParams(1.0, B, kMinTemperature)).magnitude();
        CHECK(w == doctest::Approx(zeroT_clean_witness(B, 1.0)).epsilon(2e-3));
    }
}

TEST_CASE("occupation and tanh forms agree in magnitude with opposite sign") {
    for (double T : {0.01, 0.1, 0.5, 2.0})
        for (double B : {0.0, 0.45, 1.1}) {
            const auto f = clean_witness_forms(ChainParams(1.0, B, T));
            CHECK(std::fabs(f.n_form + f.tanh_form) <= 1e-12);
        }
}

TEST_CASE("witness is the coupling derivative of the free energy") {
    for (double T : {0.05, 0.3, 1.0})
        for (double B : {0.0, 0.7}) {
            const ChainParams p(1.0, B, T);
            const double h = 1e-3;
            auto lz = [&](double J) { return lnZ0_density(p.with_J(J)); };
            // Richardson-extrapolated central difference.
            const double d1 = (lz(1 + h) - lz(1 - h)) / (2 * h);
            const double d2 = (lz(1 + 2 * h) - lz(1 - 2 * h)) / (4 * h);
            const double deriv = (4 * d1 - d2) / 3;
            CHECK(std::fabs(2.0 / p.beta() * deriv - clean_signed_witness(p, CleanForm::TanhForm)) <= 1e-6);
        }
}

TEST_CASE("high temperature kills the witness") {
    CHECK(clean_witness(ChainParams(1.0, 0.0, 50.0)).magnitude() < 0.05);
}

TEST_CASE("grid refinement leaves the clean witness unchanged") {
    const ChainParams p(1.0, 0.4, 0.1);
    const double a = clean_signed_witness(p, CleanForm::NForm, 0);
    const double b = clean_signed_witness(p, CleanForm::NForm, 4096);
    CHECK(std::fabs(a - b) < 1e-12);
}

TEST_CASE("quadrature refuses temperatures below the limit") {
    CHECK_THROWS_AS(clean_witness(ChainParams(1.0, 0.0, 0.004)), TemperatureTooLow);
    CHECK_THROWS_AS(lnZ0_density(ChainParams(1.0, 0.0, 0.001)), TemperatureTooLow);
}

TEST_CASE("free energy density limits") {
    for (double B : {0.0, 0.4, 2.0}) {
        const ChainParams p(0.0, B, 0.3);
        CHECK(lnZ0_density(p) == doctest::Approx(std::log(2 * std::cosh(p.beta() * B))).epsilon(1e-13));
    }
    CHECK(lnZ0_density(ChainParams(1.0, 0.0, 1e6)) == doctest::Approx(std::log(2.0)).epsilon(1e-10));
}

TEST_CASE("clean witness limits and hand values") {
    CHECK(clean_signed_witness(ChainParams(1.0, 0.0, kMinTemperature), CleanForm::NForm) ==
          doctest::Approx(-4.0 / std::numbers::pi).epsilon(2e-3));
    CHECK(clean_witness(ChainParams(1.0, 10.0, 0.1)).magnitude() < 1e-8);
    CHECK(clean_witness(ChainParams(1.0, 0.2, 1e6)).magnitude() < 1e-5);
    CHECK(zeroT_clean_witness(1.0, 1.0) == 0.0);
    // 0.619 sits just above the critical field 0.618991, so the witness is just below 1.
    CHECK(zeroT_clean_witness(0.619, 1.0) == doctest::Approx(0.9999909).epsilon(1e-6));
    CHECK(zeroT_clean_witness(0.6189, 1.0) > 1.0);
    CHECK(zeroT_critical_field(2.0) == doctest::Approx(1.23797).epsilon(1e-5));
}
