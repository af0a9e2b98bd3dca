#include "dw/validation.hpp"

#include "dw/clean_thermo.hpp"
#include "dw/dense_ed.hpp"
#include "dw/parallel.hpp"
#include "dw/perturbative.hpp"
#include "dw/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace dw::validation {

EdComparison compare_ed_free_fermion(std::size_t min_sites, std::size_t max_sites, std::size_t per_size,
                                     double variance, const ChainParams& p, std::uint64_t seed,
                                     const OracleOptions& opts) {
    struct Job {
        std::size_t sites;
        std::uint64_t index;
    };
    std::vector<Job> jobs;
    for (std::size_t n = min_sites; n <= max_sites; ++n)
        for (std::size_t i = 0; i < per_size; ++i) jobs.push_back({n, n * 1000 + i});

    std::vector<std::pair<double, double>> dev(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t k) {
        const Realization r = sample_realization(variance, variance, jobs[k].sites, seed, jobs[k].index);
        const auto ff = realization_witness(r, p, opts);
        const auto ex = ed::thermal_observables(ed::build_hamiltonian(r, p), p);
        dev[k] = {std::fabs(ff.lnZ - ex.lnZ), std::fabs(ff.w_signed - ex.witness_signed)};
    });

    EdComparison out;
    out.realizations = jobs.size();
    for (const auto& [dl, dw_] : dev) {
        out.max_lnZ_dev = std::max(out.max_lnZ_dev, dl);
        out.max_witness_dev = std::max(out.max_witness_dev, dw_);
    }
    return out;
}

namespace {

CheckResult make(std::string name, double measured, double tolerance) {
    return {std::move(name), measured, tolerance, std::isfinite(measured) && measured <= tolerance};
}

// Residual of the kernel beyond its first-order Taylor expansion about the
// diagonal, in units of beta^2, at a dimensionless energy offset x = beta * d.
double patch_residual(const ChainParams& p, double q, double x) {
    const auto ctx = CorrectionKernelContext::at(q, p);
    const double d = x / p.beta();
    const double cos_p = std::cos(q) + d / (2.0 * p.J());
    const double pm = std::acos(cos_p);
    const double n = ctx.fermi_q.n, b = p.beta();
    const double d3n = -b * b * b * n * (1.0 - n) * (1.0 - 6.0 * n + 6.0 * n * n);
    const double k = kernel_K(q, pm, ctx);
    return std::fabs(k - (kernel_limit(ctx) - d3n * d / 6.0)) / (b * b);
}

double simd_max_dev() {
    const simd::KernelTable& ref = simd::scalar_kernels();
    const simd::KernelTable& act = simd::active_kernels();
    const std::size_t n = 203;
    std::vector<double> eps(n), occ(n), c(n), s(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double p = 2.0 * std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(n);
        c[j] = std::cos(p);
        s[j] = std::sin(p);
        eps[j] = 2.0 * c[j] - 0.6;
        occ[j] = 1.0 / (std::exp(4.0 * eps[j]) + 1.0);
    }
    const double eq = eps[17];
    simd::CorrectionRow row{eq, occ[17], 4.0 * occ[17] * (1 - occ[17]), 0.25, c[17], s[17], 1e-6,
                            eps.data(), occ.data(), c.data(), s.data(), n};
    double dev = std::fabs(ref.correction_row_sum(row) - act.correction_row_sum(row));

    std::vector<double> x1 = c, y1 = s, x2 = c, y2 = s;
    ref.givens_rotate(x1.data(), y1.data(), n, 0.6, 0.8);
    act.givens_rotate(x2.data(), y2.data(), n, 0.6, 0.8);
    std::vector<double> a1(n - 1, 0.5), a2(n - 1, 0.5);
    ref.bond_accumulate(a1.data(), occ.data(), n - 1, 0.3);
    act.bond_accumulate(a2.data(), occ.data(), n - 1, 0.3);
    for (std::size_t j = 0; j < n; ++j) dev = std::max({dev, std::fabs(x1[j] - x2[j]), std::fabs(y1[j] - y2[j])});
    for (std::size_t j = 0; j + 1 < n; ++j) dev = std::max(dev, std::fabs(a1[j] - a2[j]));
    return dev;
}

} // namespace

std::vector<CheckResult> run_checks(const ValidationOptions& opts) {
    std::vector<CheckResult> out;

    const std::size_t max_sites = opts.quick ? 6 : 10;
    const std::size_t per_size = opts.quick ? 5 : 20;
    const auto ed = compare_ed_free_fermion(2, max_sites, per_size, 0.01, ChainParams(1.0, 0.3, 0.4), 7, opts.oracle);
    out.push_back(make("ed_vs_free_fermion_lnZ", ed.max_lnZ_dev, 1e-9));
    out.push_back(make("ed_vs_free_fermion_witness", ed.max_witness_dev, 1e-9));

    double patch = 0.0;
    for (double T : {0.05, 0.2, 1.0})
        for (double B : {0.0, 0.5})
            for (double q : {0.7, 1.3, 2.2}) patch = std::max(patch, patch_residual(ChainParams(1.0, B, T), q, 1e-2));
    out.push_back(make("patch_taylor_continuity", patch, 1e-5));

    double forms = 0.0;
    for (double T : {0.05, 0.3, 1.2})
        for (double B : {0.0, 0.4, 0.9}) {
            const auto f = clean_witness_forms(ChainParams(1.0, B, T));
            forms = std::max(forms, std::fabs(std::fabs(f.n_form) - std::fabs(f.tanh_form)));
        }
    out.push_back(make("clean_forms_agree", forms, 1e-12));

    const double anchor = std::fabs(clean_witness(ChainParams(1.0, 0.0, kMinTemperature)).magnitude() -
                                    4.0 / std::numbers::pi);
    out.push_back(make("zero_field_anchor", anchor, 2e-3));

    const std::size_t sites = opts.quick ? 128 : 512;
    const ChainParams pc(1.0, 0.3, 0.5);
    const double chain = std::fabs(realization_witness(Realization::clean(sites), pc, opts.oracle).w_signed);
    out.push_back(make("open_chain_bulk_limit", std::fabs(chain - clean_witness(pc).magnitude()),
                       4.0 / static_cast<double>(sites)));

    out.push_back(make("simd_matches_scalar", simd_max_dev(), 0.0));
    return out;
}

std::string format_report(const std::vector<CheckResult>& checks) {
    std::string out;
    char buf[256];
    for (const auto& c : checks) {
        std::snprintf(buf, sizeof buf, "%s %s measured=%.3e tolerance=%.3e\n", c.passed ? "PASS" : "FAIL",
                      c.name.c_str(), c.measured, c.tolerance);
        out += buf;
    }
    return out;
}

} // namespace dw::validation
