#include "dw/oracle.hpp"

#include "dw/clean_thermo.hpp"
#include "dw/errors.hpp"
#include "dw/numerics/quadrature.hpp"
#include "dw/parallel.hpp"
#include "dw/rng.hpp"
#include "dw/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dw {

namespace {
constexpr std::uint32_t kCouplingStream = 0;
constexpr std::uint32_t kFieldStream = 1;

// log(1 + exp(x)) without overflow.
double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::fabs(x))); }

bool all_equal(std::span<const double> x) {
    return std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
}
} // namespace

Realization Realization::clean(std::size_t sites) {
    if (sites < 2) throw InvalidArgument("a chain needs at least two sites");
    Realization r;
    r.couplings.assign(sites - 1, 0.0);
    r.fields.assign(sites, 0.0);
    return r;
}

Realization Realization::negated() const {
    Realization r = *this;
    for (double& x : r.couplings) x = -x;
    for (double& x : r.fields) x = -x;
    return r;
}

Realization sample_realization(double coupling_variance, double field_variance, std::size_t sites,
                               std::uint64_t seed, std::uint64_t index) {
    if (!(coupling_variance >= 0.0) || !(field_variance >= 0.0))
        throw InvalidArgument("disorder variance must be >= 0");
    Realization r = Realization::clean(sites);
    r.seed_index = index;
    if (coupling_variance > 0.0) {
        const double sd = std::sqrt(coupling_variance);
        for (std::size_t l = 0; l + 1 < sites; ++l)
            r.couplings[l] = sd * counter_normal(seed, index, kCouplingStream, static_cast<std::uint32_t>(l));
    }
    if (field_variance > 0.0) {
        const double sd = std::sqrt(field_variance);
        for (std::size_t l = 0; l < sites; ++l)
            r.fields[l] = sd * counter_normal(seed, index, kFieldStream, static_cast<std::uint32_t>(l));
    }
    return r;
}

Realization sample_realization(const DisorderSpec& spec, std::size_t sites, std::uint64_t seed,
                               std::uint64_t index) {
    const double v = spec.variance();
    return spec.channel() == Channel::Coupling ? sample_realization(v, 0.0, sites, seed, index)
                                               : sample_realization(0.0, v, sites, seed, index);
}

SingleParticle single_particle_matrix(const Realization& r, const ChainParams& p, double hopping_sign) {
    const std::size_t n = r.sites();
    if (n < 2 || r.couplings.size() + 1 != n) throw InvalidArgument("malformed realization");
    std::vector<double> diag(n), off(n - 1);
    double shift = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        const double field = p.B() + r.fields[l];
        diag[l] = -2.0 * field;
        shift += field;
    }
    for (std::size_t l = 0; l + 1 < n; ++l) off[l] = hopping_sign * (p.J() + r.couplings[l]);
    return {numerics::TridiagMatrix(std::move(diag), std::move(off)), shift};
}

namespace {
struct Solved {
    numerics::EigenSystem eigen;
    double const_shift;
};

Solved solve(const Realization& r, const ChainParams& p, const OracleOptions& opts) {
    require_quadrature_temperature(p);
    auto sp = single_particle_matrix(r, p, opts.hopping_sign);
    return {numerics::tridiag_eigh(sp.matrix, opts.eigen_method), sp.const_shift};
}

std::vector<double> correlations_from(const numerics::EigenSystem& es, double beta) {
    const std::size_t n = es.size();
    std::vector<double> acc(n - 1, 0.0);
    const auto& kernels = simd::active_kernels();
    for (std::size_t k = 0; k < n; ++k) {
        const double f = fermi(es.values[k], beta);
        kernels.bond_accumulate(acc.data(), es.vector(k).data(), n - 1, f);
    }
    return acc;
}
} // namespace

std::vector<double> bond_correlations(const Realization& r, const ChainParams& p, const OracleOptions& opts) {
    return correlations_from(solve(r, p, opts).eigen, p.beta());
}

RealizationObservables realization_witness(const Realization& r, const ChainParams& p, const OracleOptions& opts) {
    const Solved s = solve(r, p, opts);
    const std::size_t n = s.eigen.size();
    const std::vector<double> c = correlations_from(s.eigen, p.beta());
    const double norm = opts.normalization == BondNormalization::Bonds ? static_cast<double>(n - 1)
                                                                       : static_cast<double>(n);
    // <sx sx + sy sy> = 2 <c+ c' + h.c.> = 4 C_{l,l+1} for real eigenvectors.
    const double w = 4.0 * numerics::pairwise_sum(c) / norm;

    std::vector<double> terms(n);
    for (std::size_t k = 0; k < n; ++k) terms[k] = softplus(-p.beta() * s.eigen.values[k]);
    const double lnZ = -p.beta() * s.const_shift + numerics::pairwise_sum(terms);
    return {w, lnZ};
}

std::vector<RealizationObservables> sample_observables(const ChainParams& p, double coupling_variance,
                                                       double field_variance, std::size_t sites,
                                                       std::size_t samples, std::uint64_t seed,
                                                       Sampling sampling, const OracleOptions& opts) {
    if (sampling == Sampling::Antithetic && samples % 2 != 0)
        throw InvalidArgument("antithetic sampling needs an even sample count");
    std::vector<RealizationObservables> out(samples);
    parallel_for(samples, [&](std::size_t i) {
        if (sampling == Sampling::Antithetic) {
            Realization r = sample_realization(coupling_variance, field_variance, sites, seed, i / 2);
            if (i % 2 == 1) r = r.negated();
            out[i] = realization_witness(r, p, opts);
        } else {
            out[i] = realization_witness(sample_realization(coupling_variance, field_variance, sites, seed, i),
                                         p, opts);
        }
    });
    return out;
}

OracleEstimate reduce_observables(std::span<const RealizationObservables> obs, AverageKind kind, std::size_t block) {
    const std::size_t m = obs.size();
    if (m < 2) throw InvalidArgument("an oracle estimate needs at least two samples");
    std::vector<double> w(m), lz(m), absw(m);
    for (std::size_t i = 0; i < m; ++i) {
        w[i] = obs[i].w_signed;
        lz[i] = obs[i].lnZ;
        absw[i] = std::fabs(w[i]);
    }

    OracleEstimate est;
    est.kind = kind;
    est.samples = m;
    est.abs_mean = numerics::pairwise_sum(absw) / static_cast<double>(m);
    if (kind == AverageKind::Annealed) {
        const std::vector<double> weights = numerics::logsumexp_weights(lz);
        const double wmax = *std::max_element(weights.begin(), weights.end());
        if (wmax > 1.0 - 1e-12)
            throw DegenerateWeights("one realization carries weight " + std::to_string(wmax) +
                                    " of the annealed average");
        est.effective_samples = numerics::effective_sample_size(weights);
        if (all_equal(w)) {
            est.signed_mean = w.front();
        } else {
            const auto r = numerics::jackknife_weighted_mean_blocked(w, weights, block);
            est.signed_mean = r.mean;
            est.std_err = r.std_err;
        }
    } else {
        est.effective_samples = static_cast<double>(m);
        if (all_equal(w)) {
            est.signed_mean = w.front();
        } else if (block == 1) {
            const auto r = numerics::jackknife_mean(w);
            est.signed_mean = r.mean;
            est.std_err = r.std_err;
        } else {
            const std::vector<double> uniform(m, 1.0 / static_cast<double>(m));
            const auto r = numerics::jackknife_weighted_mean_blocked(w, uniform, block);
            est.signed_mean = r.mean;
            est.std_err = r.std_err;
        }
    }
    est.mean = std::fabs(est.signed_mean);
    return est;
}

OracleEstimate oracle_witness(const ChainParams& p, const DisorderSpec& spec, std::size_t sites,
                              std::size_t samples, std::uint64_t seed, AverageKind kind,
                              const OracleOptions& opts, Sampling sampling) {
    if (sites < 4) throw InvalidArgument("oracle estimates need at least 4 sites");
    if (samples < 2) throw InvalidArgument("oracle estimates need at least 2 samples");
    const double cv = spec.channel() == Channel::Coupling ? spec.variance() : 0.0;
    const double fv = spec.channel() == Channel::Field ? spec.variance() : 0.0;
    const auto obs = sample_observables(p, cv, fv, sites, samples, seed, sampling, opts);
    return reduce_observables(obs, kind == AverageKind::None ? AverageKind::Quenched : kind,
                              sampling == Sampling::Antithetic ? 2 : 1);
}

OracleSlopes oracle_slopes(const ChainParams& p, std::span<const double> deltas, const SlopeOptions& opts) {
    if (opts.sites < 4) throw InvalidArgument("slope estimates need at least 4 sites");
    if (opts.samples < 4) throw InvalidArgument("slope estimates need at least 4 samples");
    const std::size_t block = opts.sampling == Sampling::Antithetic ? 2 : 1;

    OracleSlopes out;
    out.clean_signed = realization_witness(Realization::clean(opts.sites), p, opts.oracle).w_signed;
    for (double delta : deltas) {
        if (!(delta > 0.0)) throw InvalidArgument("slope estimates need nonzero variances");
        const auto obs =
            sample_observables(p, delta, 0.0, opts.sites, opts.samples, opts.seed, opts.sampling, opts.oracle);
        const std::size_t m = obs.size();

        // Differences against the deterministic clean baseline, scaled by 1/delta.
        std::vector<RealizationObservables> scaled(m);
        std::vector<double> diff(m);
        for (std::size_t i = 0; i < m; ++i) {
            diff[i] = (obs[i].w_signed - out.clean_signed) / delta;
            scaled[i] = {diff[i], obs[i].lnZ};
        }

        SlopePoint pt;
        pt.delta = delta;
        const auto unpaired = numerics::jackknife_mean(diff);
        pt.quenched_err_unpaired = unpaired.std_err;
        const auto quenched = reduce_observables(scaled, AverageKind::Quenched, block);
        pt.quenched = quenched.signed_mean;
        pt.quenched_err = quenched.std_err;
        const auto annealed = reduce_observables(scaled, AverageKind::Annealed, block);
        pt.annealed = annealed.signed_mean;
        pt.annealed_err = annealed.std_err;
        pt.effective_samples = annealed.effective_samples;
        out.points.push_back(pt);
    }
    return out;
}

} // namespace dw
