#include "dw/perturbative.hpp"

#include "dw/clean_thermo.hpp"
#include "dw/errors.hpp"
#include "dw/simd/kernels.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>
#include <vector>

namespace dw {

using numerics::QuadratureGrid;

CorrectionKernelContext CorrectionKernelContext::at(double q, const ChainParams& p) {
    const double e = dispersion(q, p);
    return {p, q, e, fermi_derivs(e, p.beta())};
}

double kernel_K(double q, double p, const CorrectionKernelContext& ctx, double tol_eps) {
    (void)q;
    const double ep = dispersion(p, ctx.params);
    const double d = ep - ctx.eps_q;
    if (!(std::fabs(d) > tol_eps)) {
        std::ostringstream msg;
        msg << "kernel_K called inside the patch band at (q, p) = (" << ctx.q << ", " << p << ")";
        throw ContractViolation(msg.str());
    }
    const double nq = ctx.fermi_q.n;
    const double np = fermi(ep, ctx.params.beta());
    return (nq - np) / (d * d) - ctx.params.beta() * nq * (1.0 - nq) / d;
}

double kernel_limit(const CorrectionKernelContext& ctx) { return -0.5 * ctx.fermi_q.d2n; }

namespace {

std::size_t pick_grid(const ChainParams& p, const PerturbativeOptions& opts) {
    return opts.grid == 0 ? numerics::grid_size_for(p.beta()) : opts.grid;
}

// Inner-grid tables shared by every row of the correction integral.
struct InnerTables {
    QuadratureGrid grid;
    std::vector<double> eps, n, cos, sin;

    InnerTables(const ChainParams& p, std::size_t size) : grid(QuadratureGrid::offset(size)) {
        eps.resize(size);
        n.resize(size);
        cos.resize(size);
        sin.resize(size);
        for (std::size_t j = 0; j < size; ++j) {
            cos[j] = std::cos(grid[j]);
            sin[j] = std::sin(grid[j]);
            eps[j] = dispersion(grid[j], p);
            n[j] = fermi(eps[j], p.beta());
        }
    }
};

// (2/pi) int dp cos^2((q+p)/2) K(q, p) with the limit patch.
double quenched_row(double q, const ChainParams& p, const InnerTables& t, double tol_eps) {
    const auto ctx = CorrectionKernelContext::at(q, p);
    const double nq = ctx.fermi_q.n;
    const double nq_complement = fermi(-ctx.eps_q, p.beta());
    const simd::CorrectionRow row{ctx.eps_q,
                                  nq,
                                  p.beta() * nq * nq_complement,
                                  kernel_limit(ctx),
                                  std::cos(q),
                                  std::sin(q),
                                  tol_eps,
                                  t.eps.data(),
                                  t.n.data(),
                                  t.cos.data(),
                                  t.sin.data(),
                                  t.grid.size()};
    const double sum = simd::active_kernels().correction_row_sum(row);
    if (!std::isfinite(sum)) {
        for (std::size_t j = 0; j < t.grid.size(); ++j) {
            if (std::fabs(t.eps[j] - ctx.eps_q) <= tol_eps) continue;
            const double k = kernel_K(q, t.grid[j], ctx, tol_eps);
            if (!std::isfinite(k)) {
                std::ostringstream msg;
                msg << "correction kernel is " << k << " at (q, p) = (" << q << ", " << t.grid[j] << ")";
                throw SingularKernel(msg.str());
            }
        }
        throw SingularKernel("correction integral overflowed at q = " + std::to_string(q));
    }
    return 2.0 / std::numbers::pi * t.grid.weight() * sum;
}

double extra_sign(const PerturbativeOptions& opts) {
    return opts.annealed_sign == ExtraTermSign::Negative ? -1.0 : 1.0;
}

// (2 beta^2 / pi) n(q)(1 - n(q)) cos q * moment, without the sign.
double annealed_extra(double q, const ChainParams& p, double moment) {
    const double e = dispersion(q, p);
    const double n = fermi(e, p.beta());
    const double m = fermi(-e, p.beta());
    return 2.0 * p.beta() * p.beta() / std::numbers::pi * n * m * std::cos(q) * moment;
}

double compute_moment(const ChainParams& p, std::size_t size) {
    const QuadratureGrid grid = QuadratureGrid::offset(size);
    std::vector<double> v(size);
    for (std::size_t j = 0; j < size; ++j) v[j] = fermi(dispersion(grid[j], p), p.beta()) * std::cos(grid[j]);
    return grid.weight() * numerics::pairwise_sum(v);
}

} // namespace

double occupation_cos_moment(const ChainParams& p, std::size_t grid) {
    using Key = std::tuple<double, double, double, std::size_t>;
    static std::mutex mutex;
    static std::map<Key, double> cache;
    const Key key{p.J(), p.B(), p.T(), grid};
    {
        std::lock_guard<std::mutex> lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    const double value = compute_moment(p, grid);
    std::lock_guard<std::mutex> lock(mutex);
    if (cache.size() > 4096) cache.clear();
    cache.emplace(key, value);
    return value;
}

double G_quenched(double q, const ChainParams& p, const PerturbativeOptions& opts) {
    require_quadrature_temperature(p);
    const InnerTables tables(p, pick_grid(p, opts));
    return quenched_row(q, p, tables, opts.tol_eps);
}

double G_annealed(double q, const ChainParams& p, const PerturbativeOptions& opts) {
    const double gq = G_quenched(q, p, opts);
    const double moment = occupation_cos_moment(p, pick_grid(p, opts));
    return gq + extra_sign(opts) * annealed_extra(q, p, moment);
}

double CorrectionSlopes::slope(AverageKind kind) const {
    switch (kind) {
    case AverageKind::Quenched: return quenched;
    case AverageKind::Annealed: return annealed;
    case AverageKind::None: break;
    }
    return 0.0;
}

CorrectionSlopes correction_slopes(const ChainParams& p, const PerturbativeOptions& opts) {
    require_quadrature_temperature(p);
    const std::size_t size = pick_grid(p, opts);
    const InnerTables inner(p, size);
    const QuadratureGrid outer = QuadratureGrid::midpoint(size);
    const double moment = occupation_cos_moment(p, size);

    std::vector<double> clean(size), quenched(size), extra(size);
    for (std::size_t i = 0; i < size; ++i) {
        const double q = outer[i];
        const double c = std::cos(q);
        clean[i] = c * fermi(dispersion(q, p), p.beta());
        quenched[i] = c * quenched_row(q, p, inner, opts.tol_eps);
        extra[i] = c * annealed_extra(q, p, moment);
    }
    // Same operation order as clean_signed_witness, so Delta = 0 reproduces it bit for bit.
    auto integrate = [&](const std::vector<double>& v) {
        return 2.0 / std::numbers::pi * (outer.weight() * numerics::pairwise_sum(v));
    };
    CorrectionSlopes s;
    s.grid = size;
    s.clean = integrate(clean);
    s.quenched = -integrate(quenched);
    s.annealed = s.quenched - extra_sign(opts) * integrate(extra);
    return s;
}

WitnessResult witness_from_slopes(const CorrectionSlopes& s, double delta, AverageKind kind) {
    return {s.clean, delta * s.slope(kind), kind};
}

WitnessResult perturbative_witness(const ChainParams& p, const DisorderSpec& d, AverageKind kind,
                                   const PerturbativeOptions& opts) {
    if (d.channel() != Channel::Coupling)
        throw FieldChannelUnsupported(
            "no first-order formula for random fields; use the finite-chain oracle engine");
    require_quadrature_temperature(p);
    if (!d.perturbative_valid()) warn("delta exceeds perturbative validity 1e-4");
    return witness_from_slopes(correction_slopes(p, opts), d.variance(), kind);
}

} // namespace dw
