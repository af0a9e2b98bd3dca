#include "doctest.h"

#include "dw/errors.hpp"
#include "dw/phase_scan.hpp"

#include <cmath>

using namespace dw;

namespace {

template <class F>
PhaseGrid synthetic(std::size_t nB, std::size_t nT, Range B, Range T, F&& f) {
    PhaseGrid g;
    g.B_axis = linspace(B, nB);
    g.T_axis = linspace(T, nT);
    for (double t : g.T_axis)
        for (double b : g.B_axis) g.values.emplace_back(f(b, t), 0.0, AverageKind::None);
    return g;
}

} // namespace

TEST_CASE("linspace hits both ends exactly") {
    const auto a = linspace({0.005, 1.5}, 64);
    CHECK(a.front() == 0.005);
    CHECK(a.back() == 1.5);
    CHECK_THROWS_AS(linspace({0, 1}, 1), GridTooSmall);
    CHECK_THROWS_AS(linspace({1, 0}, 4), InvalidArgument);
}

TEST_CASE("region area is exact for linear fields") {
    const auto strip = synthetic(9, 5, {0, 2}, {0, 1}, [](double b, double) { return 2.0 - b; });
    CHECK(region_area(strip) == doctest::Approx(1.0));
    const auto tri = synthetic(11, 11, {0, 1}, {0, 1}, [](double b, double t) { return 1.5 - b - t; });
    CHECK(region_area(tri) == doctest::Approx(0.125));
    const auto none = synthetic(4, 4, {0, 1}, {0, 1}, [](double, double) { return 0.5; });
    CHECK(region_area(none) == 0.0);
    const auto all = synthetic(4, 4, {0, 1}, {0, 2}, [](double, double) { return 3.0; });
    CHECK(region_area(all) == doctest::Approx(2.0));
}

TEST_CASE("magnitude, not the signed value, decides the region") {
    const auto g = synthetic(5, 5, {0, 1}, {0, 1}, [](double b, double) { return -(2.0 - 2 * b); });
    CHECK(region_area(g) == doctest::Approx(0.5));
}

TEST_CASE("containment reports nodes that leave the outer region") {
    const auto inner = synthetic(6, 6, {0, 1}, {0, 1}, [](double b, double) { return 1.5 - b; });
    const auto outer = synthetic(6, 6, {0, 1}, {0, 1}, [](double b, double) { return 1.8 - b; });
    CHECK(containment(inner, outer).contained());
    const auto rep = containment(outer, inner);
    CHECK_FALSE(rep.contained());
    for (const auto& c : rep.violations) CHECK(outer.B_axis[c.iB] >= 0.5);
    const auto other = synthetic(7, 6, {0, 1}, {0, 1}, [](double, double) { return 0.0; });
    CHECK_THROWS_AS(containment(inner, other), AxisMismatch);
}

TEST_CASE("lobe detector looks only inside its window") {
    const auto g = synthetic(21, 11, {0, 1.2}, {0.005, 0.1}, [](double b, double) { return b > 1.0 ? 1.2 : 0.5; });
    CHECK(lobe_detector(g, {{0.9, 1.1}, {0.005, 0.05}}).found);
    const auto miss = lobe_detector(g, {{0.63, 0.95}, {0.005, 0.05}});
    CHECK_FALSE(miss.found);
    CHECK(miss.max_witness == doctest::Approx(0.5));
    CHECK_THROWS_AS(lobe_detector(g, {{0.9, 1.3}, {0.005, 0.05}}), WindowOutOfRange);
}

TEST_CASE("perturbative scan agrees with pointwise evaluation") {
    ScanRequest req;
    req.resolution_B = req.resolution_T = 6;
    req.T = {0.05, 1.0};
    req.disorder = DisorderSpec(Channel::Coupling, 1e-4);
    req.kind = AverageKind::Annealed;
    const auto g = scan(req);
    for (std::size_t iT = 0; iT < 6; ++iT)
        for (std::size_t iB = 0; iB < 6; ++iB) {
            const auto w = perturbative_witness(ChainParams(1.0, g.B_axis[iB], g.T_axis[iT]), req.disorder, req.kind);
            CHECK(g.at(iB, iT).signed_value() == w.signed_value());
        }
}

TEST_CASE("slope fields materialise any variance without recomputation") {
    const auto f = scan_slopes({0, 1.2}, {0.05, 1.0}, 5, 4, 1.0);
    const auto a = f.materialize(0.0, AverageKind::Quenched);
    const auto b = f.materialize(1e-4, AverageKind::Quenched);
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i].correction_part() == 0.0);
    CHECK(b.meta.delta == 1e-4);
}

TEST_CASE("scans refuse temperatures below the quadrature limit") {
    ScanRequest req;
    req.T = {0.001, 1.0};
    req.resolution_B = req.resolution_T = 4;
    CHECK_THROWS_AS(scan(req), TemperatureTooLow);
}

TEST_CASE("oracle scan fills every node") {
    ScanRequest req;
    req.engine = Engine::Oracle;
    req.resolution_B = req.resolution_T = 3;
    req.T = {0.1, 0.5};
    req.sites = 16;
    req.samples = 4;
    req.disorder = DisorderSpec(Channel::Field, 1e-3);
    const auto g = scan(req);
    CHECK(g.values.size() == 9);
    CHECK(g.meta.engine == Engine::Oracle);
    // Low field, low temperature: clean chain well inside the entangled region.
    CHECK(g.at(0, 0).clean_part() < -1.0);
}

TEST_CASE("first-order scans at Delta = 1e-4") {
    const SlopeField f = scan_slopes({0.0, 1.2}, {kMinTemperature, 1.5}, 64, 64, 1.0);
    const auto q25 = f.materialize(2.5e-5, AverageKind::Quenched);
    const auto q100 = f.materialize(1e-4, AverageKind::Quenched);
    const auto a100 = f.materialize(1e-4, AverageKind::Annealed);
    CHECK(containment(q100, a100).contained());
    // The quenched region shrinks with the variance, so the larger-variance set
    // sits inside the smaller-variance one.
    CHECK(containment(q100, q25).contained());
    CHECK(region_area(q100) < region_area(q25));
}

TEST_CASE("no lobe near B = J at first order in Delta") {
    const SlopeField f = scan_slopes({0.6, 1.2}, {kMinTemperature, 0.1}, 61, 40, 1.0);
    const Window w{{0.9, 1.1}, {kMinTemperature, 0.05}};
    const auto clean = lobe_detector(f.materialize(0.0, AverageKind::Quenched), w);
    const auto q = lobe_detector(f.materialize(1e-4, AverageKind::Quenched), w);
    const auto a = lobe_detector(f.materialize(1e-4, AverageKind::Annealed), w);
    CHECK_FALSE(clean.found);
    CHECK_FALSE(q.found);
    CHECK_FALSE(a.found);
    CHECK(a.max_witness >= q.max_witness);
}
