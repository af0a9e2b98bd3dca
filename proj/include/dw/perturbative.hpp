#pragma once

// First-order disorder-averaged witness for random nearest-neighbour couplings in
// the thermodynamic limit:
//
//   W = | (2/pi) int dq cos q [ n(q) - Delta G(q) ] |
//   G_quenched(q) = (2/pi) int dp cos^2((q+p)/2) K(q, p)
//   K(q, p) = (n(q) - n(p)) / (e(p) - e(q))^2 - beta n(q)(1 - n(q)) / (e(p) - e(q))
//   G_annealed(q) = G_quenched(q) + s (2 beta^2 / pi) n(q)(1 - n(q)) cos q int dp n(p) cos p
//
// with s = -1 by default. That sign reproduces the Z-weighted average of the exact
// finite chain (and the second-order expansion of ln<Z>); s = +1 is selectable
// for comparison.

#include "dw/model.hpp"
#include "dw/numerics/quadrature.hpp"

#include <cstddef>

namespace dw {

enum class ExtraTermSign { Negative, Positive };

struct PerturbativeOptions {
    std::size_t grid = 0; // 0: grid_size_for(beta), used for both q and p
    double tol_eps = numerics::kDefaultTolEps;
    ExtraTermSign annealed_sign = ExtraTermSign::Negative;
};

/// Per-q state shared by every inner-integral evaluation.
struct CorrectionKernelContext {
    ChainParams params;
    double q;
    double eps_q;
    FermiDerivs fermi_q;

    static CorrectionKernelContext at(double q, const ChainParams& p);
};

/// The bracket of the correction integrand. Calling it with |e(p) - e(q)| <= tol_eps
/// is a ContractViolation: the patched integrator routes those nodes to kernel_limit.
double kernel_K(double q, double p, const CorrectionKernelContext& ctx,
                double tol_eps = numerics::kDefaultTolEps);

/// Limit of kernel_K as e(p) -> e(q): -n''(e(q)) / 2.
double kernel_limit(const CorrectionKernelContext& ctx);

double G_quenched(double q, const ChainParams& p, const PerturbativeOptions& opts = {});
double G_annealed(double q, const ChainParams& p, const PerturbativeOptions& opts = {});

/// int dp n(p) cos p on the offset grid of `grid` points. Cached per (J, B, T, grid).
double occupation_cos_moment(const ChainParams& p, std::size_t grid);

/// d(signed witness)/d(Delta) for both averages, plus the clean signed witness.
/// Every perturbative witness at these parameters is clean + Delta * slope.
struct CorrectionSlopes {
    double clean = 0.0;
    double quenched = 0.0;
    double annealed = 0.0;
    std::size_t grid = 0;

    double slope(AverageKind kind) const;
};

CorrectionSlopes correction_slopes(const ChainParams& p, const PerturbativeOptions& opts = {});

WitnessResult witness_from_slopes(const CorrectionSlopes& s, double delta, AverageKind kind);

/// Coupling disorder only (FieldChannelUnsupported otherwise). Warns, without
/// failing, when the variance exceeds the perturbative validity bound.
WitnessResult perturbative_witness(const ChainParams& p, const DisorderSpec& d, AverageKind kind,
                                   const PerturbativeOptions& opts = {});

} // namespace dw
