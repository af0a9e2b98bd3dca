#include "dw/phase_scan.hpp"

#include "dw/errors.hpp"
#include "dw/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>

namespace dw {

std::string_view to_string(Engine e) { return e == Engine::Perturbative ? "perturbative" : "oracle"; }

Engine parse_engine(std::string_view s) {
    if (s == "perturbative") return Engine::Perturbative;
    if (s == "oracle") return Engine::Oracle;
    throw InvalidArgument("unknown engine '" + std::string(s) + "'");
}

std::vector<double> linspace(Range r, std::size_t count) {
    if (count < 2) throw GridTooSmall("an axis needs at least two points");
    if (!(r.max > r.min)) throw InvalidArgument("axis range must be strictly ascending");
    std::vector<double> axis(count);
    const double step = (r.max - r.min) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) axis[i] = r.min + step * static_cast<double>(i);
    axis.back() = r.max;
    return axis;
}

std::vector<double> PhaseGrid::magnitudes() const {
    std::vector<double> m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m[i] = values[i].magnitude();
    return m;
}

std::vector<numerics::Segment> PhaseGrid::boundary(double level) const {
    const auto m = magnitudes();
    return numerics::extract_level_set(B_axis, T_axis, m, level);
}

namespace {

void check_temperature_axis(const std::vector<double>& T_axis) {
    if (T_axis.front() < kMinTemperature) {
        std::ostringstream msg;
        msg << "scan temperature " << T_axis.front() << " is below the quadrature limit " << kMinTemperature;
        throw TemperatureTooLow(msg.str());
    }
}

template <class PointFn>
void evaluate_points(std::size_t count, const std::vector<double>& B_axis, const std::vector<double>& T_axis,
                     PointFn&& fn) {
    const std::size_t nB = B_axis.size();
    parallel_for(count, [&](std::size_t idx) {
        const std::size_t iB = idx % nB, iT = idx / nB;
        try {
            fn(idx, B_axis[iB], T_axis[iT]);
        } catch (const Error& e) {
            std::ostringstream msg;
            msg << e.what() << " (at B=" << B_axis[iB] << ", T=" << T_axis[iT] << ")";
            throw Error(e.name(), msg.str());
        }
    });
}

} // namespace

SlopeField scan_slopes(Range B, Range T, std::size_t resolution_B, std::size_t resolution_T, double J,
                       const PerturbativeOptions& opts) {
    SlopeField field;
    field.B_axis = linspace(B, resolution_B);
    field.T_axis = linspace(T, resolution_T);
    field.J = J;
    check_temperature_axis(field.T_axis);
    const std::size_t count = resolution_B * resolution_T;
    field.slopes.resize(count);
    evaluate_points(count, field.B_axis, field.T_axis, [&](std::size_t idx, double b, double t) {
        field.slopes[idx] = correction_slopes(ChainParams(J, b, t), opts);
    });
    return field;
}

PhaseGrid SlopeField::materialize(double delta, AverageKind kind) const {
    PhaseGrid g;
    g.B_axis = B_axis;
    g.T_axis = T_axis;
    g.values.reserve(slopes.size());
    for (const auto& s : slopes) g.values.push_back(witness_from_slopes(s, delta, kind));
    g.meta.J = J;
    g.meta.delta = delta;
    g.meta.kind = kind;
    g.meta.engine = Engine::Perturbative;
    g.meta.resolution_B = B_axis.size();
    g.meta.resolution_T = T_axis.size();
    return g;
}

PhaseGrid scan(const ScanRequest& req) {
    if (req.engine == Engine::Perturbative) {
        if (req.disorder.channel() != Channel::Coupling)
            throw FieldChannelUnsupported("the perturbative engine supports coupling disorder only");
        if (!req.disorder.perturbative_valid()) warn("delta exceeds perturbative validity 1e-4");
        const SlopeField field =
            scan_slopes(req.B, req.T, req.resolution_B, req.resolution_T, req.J, req.perturbative);
        return field.materialize(req.disorder.variance(), req.kind);
    }

    PhaseGrid g;
    g.B_axis = linspace(req.B, req.resolution_B);
    g.T_axis = linspace(req.T, req.resolution_T);
    check_temperature_axis(g.T_axis);
    const std::size_t count = g.B_axis.size() * g.T_axis.size();
    std::vector<std::optional<WitnessResult>> slots(count);
    const AverageKind kind = req.kind == AverageKind::None ? AverageKind::Quenched : req.kind;
    evaluate_points(count, g.B_axis, g.T_axis, [&](std::size_t idx, double b, double t) {
        const ChainParams p(req.J, b, t);
        const OracleEstimate est =
            oracle_witness(p, req.disorder, req.sites, req.samples, req.seed, kind, req.oracle, Sampling::Antithetic);
        const double clean = realization_witness(Realization::clean(req.sites), p, req.oracle).w_signed;
        // Reported in the momentum-space sign convention shared with the perturbative engine.
        slots[idx].emplace(-clean, clean - est.signed_mean, kind);
    });
    g.values.reserve(count);
    for (auto& s : slots) g.values.push_back(*s);
    g.meta.J = req.J;
    g.meta.delta = req.disorder.variance();
    g.meta.channel = req.disorder.channel();
    g.meta.kind = kind;
    g.meta.engine = Engine::Oracle;
    g.meta.resolution_B = req.resolution_B;
    g.meta.resolution_T = req.resolution_T;
    g.meta.sites = req.sites;
    g.meta.samples = req.samples;
    g.meta.seed = req.seed;
    return g;
}

namespace {

double triangle_area(const std::array<double, 2>& a, const std::array<double, 2>& b, const std::array<double, 2>& c) {
    return 0.5 * std::fabs((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

// Area of the part of a triangle where the linear interpolant of the vertex
// values exceeds `level`.
double super_level_area(std::array<std::array<double, 2>, 3> p, std::array<double, 3> v, double level) {
    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
    const auto& p0 = p[idx[0]];
    const auto& p1 = p[idx[1]];
    const auto& p2 = p[idx[2]];
    const double v0 = v[idx[0]], v1 = v[idx[1]], v2 = v[idx[2]];
    const double total = triangle_area(p0, p1, p2);
    if (v0 > level) return total;
    if (v2 <= level) return 0.0;
    auto lerp = [&](const std::array<double, 2>& a, double va, const std::array<double, 2>& b, double vb) {
        const double t = (level - va) / (vb - va);
        return std::array<double, 2>{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
    };
    if (v1 > level) {
        // Only vertex 0 is below: remove the small triangle at p0.
        const auto a = lerp(p0, v0, p1, v1);
        const auto b = lerp(p0, v0, p2, v2);
        return total - triangle_area(p0, a, b);
    }
    // Only vertex 2 is above.
    const auto a = lerp(p2, v2, p0, v0);
    const auto b = lerp(p2, v2, p1, v1);
    return triangle_area(p2, a, b);
}

} // namespace

double region_area(const PhaseGrid& g, double level) {
    const std::size_t nB = g.B_axis.size(), nT = g.T_axis.size();
    if (nB < 2 || nT < 2) throw GridTooSmall("region area needs at least a 2x2 grid");
    double area = 0.0;
    for (std::size_t iT = 0; iT + 1 < nT; ++iT) {
        for (std::size_t iB = 0; iB + 1 < nB; ++iB) {
            const std::array<double, 2> a{g.B_axis[iB], g.T_axis[iT]}, b{g.B_axis[iB + 1], g.T_axis[iT]},
                c{g.B_axis[iB + 1], g.T_axis[iT + 1]}, d{g.B_axis[iB], g.T_axis[iT + 1]};
            const double va = g.at(iB, iT).magnitude(), vb = g.at(iB + 1, iT).magnitude(),
                         vc = g.at(iB + 1, iT + 1).magnitude(), vd = g.at(iB, iT + 1).magnitude();
            area += super_level_area({a, b, c}, {va, vb, vc}, level);
            area += super_level_area({a, c, d}, {va, vc, vd}, level);
        }
    }
    return area;
}

ContainmentReport containment(const PhaseGrid& inner, const PhaseGrid& outer, double tol) {
    if (inner.B_axis != outer.B_axis || inner.T_axis != outer.T_axis || inner.meta.J != outer.meta.J)
        throw AxisMismatch("containment needs identical axes and coupling");
    ContainmentReport report;
    const std::size_t nB = inner.B_axis.size();
    for (std::size_t i = 0; i < inner.values.size(); ++i) {
        if (inner.values[i].magnitude() > kEntanglementBound &&
            !(outer.values[i].magnitude() > kEntanglementBound - tol))
            report.violations.push_back({i % nB, i / nB});
    }
    return report;
}

LobeReport lobe_detector(const PhaseGrid& g, const Window& w) {
    const double eps = 1e-12;
    if (w.B.min < g.B_axis.front() - eps || w.B.max > g.B_axis.back() + eps || w.T.min < g.T_axis.front() - eps ||
        w.T.max > g.T_axis.back() + eps || !(w.B.max >= w.B.min) || !(w.T.max >= w.T.min))
        throw WindowOutOfRange("lobe window lies outside the scanned grid");
    LobeReport report;
    for (std::size_t iT = 0; iT < g.T_axis.size(); ++iT) {
        const double t = g.T_axis[iT];
        if (t < w.T.min - eps || t > w.T.max + eps) continue;
        for (std::size_t iB = 0; iB < g.B_axis.size(); ++iB) {
            const double b = g.B_axis[iB];
            if (b < w.B.min - eps || b > w.B.max + eps) continue;
            const double m = g.at(iB, iT).magnitude();
            ++report.nodes;
            report.max_witness = std::max(report.max_witness, m);
            if (m > kEntanglementBound) report.found = true;
        }
    }
    return report;
}

} // namespace dw
