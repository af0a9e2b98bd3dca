#pragma once

#include "dw/model.hpp"
#include "dw/numerics/level_set.hpp"
#include "dw/oracle.hpp"
#include "dw/perturbative.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace dw {

enum class Engine { Perturbative, Oracle };

std::string_view to_string(Engine e);
Engine parse_engine(std::string_view s);

struct Range {
    double min;
    double max;
};

/// Inclusive, evenly spaced axis.
std::vector<double> linspace(Range r, std::size_t count);

struct ScanMeta {
    double J = 1.0;
    double delta = 0.0;
    Channel channel = Channel::Coupling;
    AverageKind kind = AverageKind::Quenched;
    Engine engine = Engine::Perturbative;
    std::size_t resolution_B = 0;
    std::size_t resolution_T = 0;
    std::size_t sites = 0;   // oracle only
    std::size_t samples = 0; // oracle only
    std::uint64_t seed = 0;  // oracle only
};

/// Witness values on a rectangular (B, T) grid; values are row-major with T as
/// the slow index.
struct PhaseGrid {
    std::vector<double> B_axis;
    std::vector<double> T_axis;
    std::vector<WitnessResult> values;
    ScanMeta meta;

    const WitnessResult& at(std::size_t iB, std::size_t iT) const { return values[iT * B_axis.size() + iB]; }
    std::vector<double> magnitudes() const;
    std::vector<numerics::Segment> boundary(double level = kEntanglementBound) const;
};

struct ScanRequest {
    Range B{0.0, 1.2};
    Range T{kMinTemperature, 1.5};
    std::size_t resolution_B = 64;
    std::size_t resolution_T = 64;
    double J = 1.0;
    DisorderSpec disorder{Channel::Coupling, 0.0};
    AverageKind kind = AverageKind::Quenched;
    Engine engine = Engine::Perturbative;
    PerturbativeOptions perturbative{};
    // Oracle engine budget.
    std::size_t sites = 256;
    std::size_t samples = 400;
    std::uint64_t seed = 1;
    OracleOptions oracle{};
};

/// First-order slopes over the grid. They do not depend on the variance or on
/// the average kind, so one field serves every (delta, kind) pair.
struct SlopeField {
    std::vector<double> B_axis;
    std::vector<double> T_axis;
    double J = 1.0;
    std::vector<CorrectionSlopes> slopes;

    PhaseGrid materialize(double delta, AverageKind kind) const;
};

SlopeField scan_slopes(Range B, Range T, std::size_t resolution_B, std::size_t resolution_T, double J,
                       const PerturbativeOptions& opts = {});

PhaseGrid scan(const ScanRequest& req);

/// Area of {W > level}. Each cell is split into two triangles over which W is
/// interpolated linearly; the super-level part of each triangle is exact for that
/// interpolant.
double region_area(const PhaseGrid& g, double level = kEntanglementBound);

struct GridCell {
    std::size_t iB;
    std::size_t iT;
};

struct ContainmentReport {
    std::vector<GridCell> violations; // entangled in inner, not in outer
    bool contained() const noexcept { return violations.empty(); }
};

/// Nodes with inner magnitude > 1 and outer magnitude <= 1 - tol.
ContainmentReport containment(const PhaseGrid& inner, const PhaseGrid& outer, double tol = 1e-9);

struct Window {
    Range B;
    Range T;
};

struct LobeReport {
    bool found = false;
    double max_witness = 0.0;
    std::size_t nodes = 0;
};

/// Looks for W > 1 among grid nodes inside the window.
LobeReport lobe_detector(const PhaseGrid& g, const Window& w);

} // namespace dw
