#include "dw/clean_thermo.hpp"

#include "dw/errors.hpp"
#include "dw/numerics/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace dw {

using numerics::periodic_integral;

void require_quadrature_temperature(const ChainParams& p) {
    if (p.T() < kMinTemperature) {
        std::ostringstream msg;
        msg << "temperature " << p.T() << " is below the quadrature limit " << kMinTemperature;
        throw TemperatureTooLow(msg.str());
    }
}

namespace {
std::size_t pick_grid(const ChainParams& p, std::size_t grid) {
    return grid == 0 ? numerics::grid_size_for(p.beta()) : grid;
}

// ln(2 cosh x) without overflow.
double log_2cosh(double x) {
    const double a = std::fabs(x);
    return a + std::log1p(std::exp(-2.0 * a));
}
} // namespace

double lnZ0_density(const ChainParams& p, std::size_t grid) {
    require_quadrature_temperature(p);
    const double beta = p.beta();
    const double integral = periodic_integral(
        [&](double q) { return log_2cosh(beta * (p.J() * std::cos(q) - p.B())); }, pick_grid(p, grid));
    return integral / (2.0 * std::numbers::pi);
}

double clean_signed_witness(const ChainParams& p, CleanForm form, std::size_t grid) {
    require_quadrature_temperature(p);
    const std::size_t m = pick_grid(p, grid);
    const double beta = p.beta();
    if (form == CleanForm::NForm) {
        const double integral =
            periodic_integral([&](double q) { return std::cos(q) * fermi(dispersion(q, p), beta); }, m);
        return 2.0 / std::numbers::pi * integral;
    }
    const double integral = periodic_integral(
        [&](double q) { return std::cos(q) * std::tanh(beta * (p.J() * std::cos(q) - p.B())); }, m);
    return integral / std::numbers::pi;
}

CleanWitnessForms clean_witness_forms(const ChainParams& p, std::size_t grid) {
    return {clean_signed_witness(p, CleanForm::NForm, grid), clean_signed_witness(p, CleanForm::TanhForm, grid)};
}

WitnessResult clean_witness(const ChainParams& p, std::size_t grid) {
    return {clean_signed_witness(p, CleanForm::NForm, grid), 0.0, AverageKind::None};
}

double zeroT_clean_witness(double B, double J) {
    if (!(J > 0.0)) throw InvalidArgument("zero-temperature witness needs J > 0");
    const double ratio = B / J;
    if (std::fabs(ratio) >= 1.0) return 0.0;
    return 4.0 / std::numbers::pi * std::sqrt(1.0 - ratio * ratio);
}

double zeroT_critical_field(double J) {
    if (!(J > 0.0)) throw InvalidArgument("critical field needs J > 0");
    return J * std::sqrt(1.0 - std::numbers::pi * std::numbers::pi / 16.0);
}

} // namespace dw
