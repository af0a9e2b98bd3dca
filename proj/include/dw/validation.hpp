#pragma once

// Self-checks run by `dwitness validate`: exact diagonalisation against the
// free-fermion path, the removable-singularity patch, clean-form identities and
// SIMD/scalar agreement.

#include "dw/oracle.hpp"

#include <string>
#include <vector>

namespace dw::validation {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct ValidationOptions {
    bool quick = false;
    OracleOptions oracle{};
};

/// Largest |lnZ| and |w| discrepancy between dense ED and the free-fermion
/// oracle over random realizations with coupling and field disorder active.
struct EdComparison {
    double max_lnZ_dev = 0.0;
    double max_witness_dev = 0.0;
    std::size_t realizations = 0;
};
EdComparison compare_ed_free_fermion(std::size_t min_sites, std::size_t max_sites, std::size_t per_size,
                                     double variance, const ChainParams& p, std::uint64_t seed,
                                     const OracleOptions& opts = {});

std::vector<CheckResult> run_checks(const ValidationOptions& opts);

/// One line per check: "PASS name measured=... tolerance=...".
std::string format_report(const std::vector<CheckResult>& checks);

} // namespace dw::validation
