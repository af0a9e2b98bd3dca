#include "dw/model.hpp"

#include "dw/errors.hpp"

#include <cmath>
#include <string>

namespace dw {

ChainParams::ChainParams(double J, double B, double T) : J_(J), B_(B), T_(T), beta_(1.0 / T) {
    if (!std::isfinite(J) || !std::isfinite(B))
        throw InvalidArgument("J and B must be finite");
    if (!(T > 0.0) || !std::isfinite(T))
        throw InvalidArgument("temperature must be positive and finite, got " + std::to_string(T));
}

DisorderSpec::DisorderSpec(Channel channel, double variance) : channel_(channel), variance_(variance) {
    if (!(variance >= 0.0) || !std::isfinite(variance))
        throw InvalidArgument("disorder variance must be >= 0, got " + std::to_string(variance));
}

std::string_view to_string(Channel c) { return c == Channel::Coupling ? "coupling" : "field"; }

std::string_view to_string(AverageKind k) {
    switch (k) {
    case AverageKind::Quenched: return "quenched";
    case AverageKind::Annealed: return "annealed";
    case AverageKind::None: break;
    }
    return "none";
}

Channel parse_channel(std::string_view s) {
    if (s == "coupling") return Channel::Coupling;
    if (s == "field") return Channel::Field;
    throw InvalidArgument("unknown disorder channel '" + std::string(s) + "'");
}

AverageKind parse_average(std::string_view s) {
    if (s == "quenched") return AverageKind::Quenched;
    if (s == "annealed") return AverageKind::Annealed;
    if (s == "none") return AverageKind::None;
    throw InvalidArgument("unknown average kind '" + std::string(s) + "'");
}

WitnessResult::WitnessResult(double clean_part, double correction_part, AverageKind kind)
    : clean_(clean_part), correction_(correction_part),
      magnitude_(std::abs(clean_part + correction_part)), kind_(kind) {}

WitnessResult::WitnessResult(double clean_part, double correction_part, double magnitude,
                             AverageKind kind)
    : WitnessResult(clean_part, correction_part, kind) {
    if (magnitude != magnitude_)
        throw ContractViolation("witness magnitude must equal |signed| exactly");
}

double dispersion(double q, const ChainParams& p) noexcept {
    return 2.0 * p.J() * std::cos(q) - 2.0 * p.B();
}

double fermi(double energy, double beta) noexcept {
    const double x = beta * energy;
    if (x >= 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

FermiDerivs fermi_derivs(double energy, double beta) noexcept {
    const double n = fermi(energy, beta);
    // n(1-n) from the complementary occupation keeps precision in both tails.
    const double m = fermi(-energy, beta);
    const double nm = n * m;
    return {n, -beta * nm, beta * beta * nm * (m - n)};
}

} // namespace dw
