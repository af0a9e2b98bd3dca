#pragma once

#include "dw/model.hpp"

#include <cstddef>

namespace dw {

enum class CleanForm {
    /// (2/pi) int dq cos q n(q): the momentum-occupation form.
    NForm,
    /// (1/pi) int dq cos q tanh(beta (J cos q - B)): the J-derivative of ln Z0.
    TanhForm,
};

struct CleanWitnessForms {
    double n_form;
    double tanh_form;
};

/// Throws TemperatureTooLow below kMinTemperature.
void require_quadrature_temperature(const ChainParams& p);

/// ln Z0 / N in the thermodynamic limit. `grid` = 0 picks grid_size_for(beta).
double lnZ0_density(const ChainParams& p, std::size_t grid = 0);

double clean_signed_witness(const ChainParams& p, CleanForm form, std::size_t grid = 0);
CleanWitnessForms clean_witness_forms(const ChainParams& p, std::size_t grid = 0);
WitnessResult clean_witness(const ChainParams& p, std::size_t grid = 0);

/// Magnitude of the clean witness at T = 0: (4/pi) sqrt(1 - (B/J)^2) inside the band, else 0.
double zeroT_clean_witness(double B, double J);

/// Field at which the T = 0 clean witness equals the bound: J sqrt(1 - pi^2/16).
double zeroT_critical_field(double J);

} // namespace dw
