#include "dw/numerics/stats.hpp"

#include "dw/errors.hpp"
#include "dw/numerics/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace dw::numerics {

std::vector<double> logsumexp_weights(std::span<const double> logs) {
    if (logs.empty()) throw EmptyInput("logsumexp_weights needs at least one value");
    const double c = *std::max_element(logs.begin(), logs.end());
    if (!std::isfinite(c)) throw InvalidArgument("logsumexp_weights needs finite inputs");
    std::vector<double> w(logs.size());
    for (std::size_t i = 0; i < logs.size(); ++i) {
        if (!std::isfinite(logs[i])) throw InvalidArgument("logsumexp_weights needs finite inputs");
        w[i] = std::exp(logs[i] - c);
    }
    const double total = pairwise_sum(w);
    for (double& x : w) x /= total;
    return w;
}

double logsumexp(std::span<const double> logs) {
    if (logs.empty()) throw EmptyInput("logsumexp needs at least one value");
    const double c = *std::max_element(logs.begin(), logs.end());
    std::vector<double> e(logs.size());
    for (std::size_t i = 0; i < logs.size(); ++i) e[i] = std::exp(logs[i] - c);
    return c + std::log(pairwise_sum(e));
}

double effective_sample_size(std::span<const double> weights) {
    std::vector<double> sq(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) sq[i] = weights[i] * weights[i];
    return 1.0 / pairwise_sum(sq);
}

MeanWithError jackknife_mean(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) throw EmptyInput("jackknife of an empty sample");
    std::vector<double> v(x.begin(), x.end());
    const double total = pairwise_sum(v);
    MeanWithError out;
    out.mean = total / static_cast<double>(n);
    if (n < 2) return out;
    std::vector<double> dev(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double loo = (total - x[i]) / static_cast<double>(n - 1);
        dev[i] = (loo - out.mean) * (loo - out.mean);
    }
    out.std_err = std::sqrt(static_cast<double>(n - 1) / static_cast<double>(n) * pairwise_sum(dev));
    return out;
}

MeanWithError jackknife_weighted_mean(std::span<const double> x, std::span<const double> weights) {
    return jackknife_weighted_mean_blocked(x, weights, 1);
}

MeanWithError jackknife_weighted_mean_blocked(std::span<const double> x, std::span<const double> weights,
                                              std::size_t block) {
    const std::size_t n = x.size();
    if (n == 0) throw EmptyInput("jackknife of an empty sample");
    if (weights.size() != n) throw InvalidArgument("weights and samples differ in length");
    if (block == 0 || n % block != 0) throw InvalidArgument("sample count must be a multiple of the block");

    std::vector<double> wx(n);
    for (std::size_t i = 0; i < n; ++i) wx[i] = weights[i] * x[i];
    std::vector<double> w(weights.begin(), weights.end());
    const double sw = pairwise_sum(w);
    const double swx = pairwise_sum(wx);

    MeanWithError out;
    out.mean = swx / sw;
    const std::size_t blocks = n / block;
    if (blocks < 2) return out;
    std::vector<double> dev(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        double bw = 0.0, bwx = 0.0;
        for (std::size_t i = b * block; i < (b + 1) * block; ++i) {
            bw += w[i];
            bwx += wx[i];
        }
        const double loo = (swx - bwx) / (sw - bw);
        dev[b] = (loo - out.mean) * (loo - out.mean);
    }
    out.std_err = std::sqrt(static_cast<double>(blocks - 1) / static_cast<double>(blocks) * pairwise_sum(dev));
    return out;
}

} // namespace dw::numerics
