#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dw::numerics {

/// Normalised weights exp(l_i - max l) / sum_j exp(l_j - max l). Only log values
/// are ever formed, so partition functions that overflow a double are fine.
std::vector<double> logsumexp_weights(std::span<const double> logs);

/// log sum_i exp(l_i).
double logsumexp(std::span<const double> logs);

/// 1 / sum w_i^2 for normalised weights.
double effective_sample_size(std::span<const double> weights);

struct MeanWithError {
    double mean = 0.0;
    double std_err = 0.0;
};

/// Delete-one jackknife of the plain mean.
MeanWithError jackknife_mean(std::span<const double> x);

/// Delete-one jackknife of the ratio sum w_i x_i / sum w_i for normalised weights w.
MeanWithError jackknife_weighted_mean(std::span<const double> x, std::span<const double> weights);

/// Delete-one-block jackknife of the weighted mean, blocks of `block` consecutive
/// samples (block = 2 keeps antithetic pairs together).
MeanWithError jackknife_weighted_mean_blocked(std::span<const double> x, std::span<const double> weights,
                                              std::size_t block);

} // namespace dw::numerics
