#pragma once

// Exact finite open chains through the Jordan-Wigner mapping, averaged over
// Gaussian disorder by Monte Carlo. This is the nonperturbative reference for the
// first-order formulas.
//
// Sign convention: the single-particle spectrum here is -2J cos k - 2B, related
// to 2J cos q - 2B by q = pi - k. Signed witnesses therefore come out with the
// opposite sign to the momentum-space formulas; compare magnitudes or flip.

#include "dw/model.hpp"
#include "dw/numerics/stats.hpp"
#include "dw/numerics/tridiag.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dw {

/// One disorder configuration: couplings add to J on the N-1 bonds, fields add to
/// B on the N sites.
struct Realization {
    std::vector<double> couplings;
    std::vector<double> fields;
    std::uint64_t seed_index = 0;

    static Realization clean(std::size_t sites);
    std::size_t sites() const noexcept { return fields.size(); }
    Realization negated() const;
};

/// Entries drawn from N(0, variance) on a counter-based stream keyed by
/// (seed, index, channel, site); independent of call order and thread count.
Realization sample_realization(const DisorderSpec& spec, std::size_t sites, std::uint64_t seed,
                               std::uint64_t index);
Realization sample_realization(double coupling_variance, double field_variance, std::size_t sites,
                               std::uint64_t seed, std::uint64_t index);

enum class BondNormalization { Bonds, Sites };

struct OracleOptions {
    BondNormalization normalization = BondNormalization::Bonds;
    numerics::EigenMethod eigen_method = numerics::EigenMethod::InverseIteration;
    /// Sign of the hopping entries of the single-particle matrix. Only the
    /// validation suite's mutation check changes it.
    double hopping_sign = -1.0;
};

struct SingleParticle {
    numerics::TridiagMatrix matrix;
    double const_shift; // H = c^T M c + const_shift
};

SingleParticle single_particle_matrix(const Realization& r, const ChainParams& p,
                                      double hopping_sign = -1.0);

struct RealizationObservables {
    double w_signed; // bond-averaged <sx sx + sy sy>
    double lnZ;
};

/// Nearest-neighbour correlations C_{l,l+1} of the thermal state.
std::vector<double> bond_correlations(const Realization& r, const ChainParams& p,
                                      const OracleOptions& opts = {});

RealizationObservables realization_witness(const Realization& r, const ChainParams& p,
                                           const OracleOptions& opts = {});

enum class Sampling {
    Independent,
    /// Consecutive indices 2k, 2k+1 use the draw of pair k and its negation.
    Antithetic,
};

/// Observables for indices [0, samples), evaluated in parallel into per-index slots.
std::vector<RealizationObservables> sample_observables(const ChainParams& p, double coupling_variance,
                                                       double field_variance, std::size_t sites,
                                                       std::size_t samples, std::uint64_t seed,
                                                       Sampling sampling, const OracleOptions& opts = {});

struct OracleEstimate {
    AverageKind kind = AverageKind::Quenched;
    double mean = 0.0;        // |signed_mean|
    double std_err = 0.0;     // jackknife
    double signed_mean = 0.0; // before the absolute value
    std::size_t samples = 0;
    double effective_samples = 0.0; // 1 / sum w^2; equals samples for quenched
    double abs_mean = 0.0;          // mean of per-realization |w| (diagnostic only)
};

/// Reduces sampled observables to a quenched (plain mean) or annealed
/// (Z-weighted mean) estimate. `block` groups samples for the jackknife.
OracleEstimate reduce_observables(std::span<const RealizationObservables> obs, AverageKind kind,
                                  std::size_t block = 1);

OracleEstimate oracle_witness(const ChainParams& p, const DisorderSpec& spec, std::size_t sites,
                              std::size_t samples, std::uint64_t seed, AverageKind kind,
                              const OracleOptions& opts = {}, Sampling sampling = Sampling::Independent);

/// Disorder slope of the witness estimated from paired realizations at each variance.
struct SlopePoint {
    double delta = 0.0;
    double quenched = 0.0;          // (<w> - w0) / delta
    double quenched_err = 0.0;      // jackknife over antithetic pairs
    double quenched_err_unpaired = 0.0; // same data treated as independent draws
    double annealed = 0.0;          // (<Z w>/<Z> - w0) / delta
    double annealed_err = 0.0;
    double effective_samples = 0.0;
};

struct OracleSlopes {
    double clean_signed = 0.0;
    std::vector<SlopePoint> points;
};

struct SlopeOptions {
    std::size_t sites = 512;
    std::size_t samples = 2000;
    std::uint64_t seed = 1;
    Sampling sampling = Sampling::Antithetic;
    OracleOptions oracle{};
};

OracleSlopes oracle_slopes(const ChainParams& p, std::span<const double> deltas, const SlopeOptions& opts);

} // namespace dw
