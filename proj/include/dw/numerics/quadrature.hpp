#pragma once

#include "dw/errors.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <vector>

namespace dw::numerics {

inline constexpr std::size_t kMinGridSize = 8;
/// Energy band inside which the removable singularity of the correction kernel
/// is replaced by its analytic limit.
inline constexpr double kDefaultTolEps = 1e-6;

/// Uniform grid on [-pi, pi] with weight 2*pi/M. `shift` is in units of the
/// step: 0.5 gives midpoints (endpoints excluded), 1.0 gives the grid offset by a
/// further half step that never meets +-q for any midpoint q.
class QuadratureGrid {
public:
    QuadratureGrid(std::size_t size, double shift = 0.5);

    static QuadratureGrid midpoint(std::size_t size) { return {size, 0.5}; }
    static QuadratureGrid offset(std::size_t size) { return {size, 1.0}; }

    std::size_t size() const noexcept { return points_.size(); }
    double weight() const noexcept { return weight_; }
    double operator[](std::size_t i) const { return points_[i]; }
    const std::vector<double>& points() const noexcept { return points_; }

private:
    std::vector<double> points_;
    double weight_;
};

/// Grid size needed to resolve a Fermi step of width ~T: max(256, ceil(16 beta)).
std::size_t grid_size_for(double beta);

/// Fixed-order pairwise (cascade) summation.
double pairwise_sum(const double* values, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

/// Midpoint-rule integral of a periodic function over [-pi, pi].
template <class F>
double periodic_integral(F&& f, std::size_t size) {
    const QuadratureGrid grid = QuadratureGrid::midpoint(size);
    std::vector<double> values(size);
    for (std::size_t i = 0; i < size; ++i) {
        values[i] = f(grid[i]);
        if (!std::isfinite(values[i])) {
            std::ostringstream msg;
            msg << "integrand is " << values[i] << " at node q=" << grid[i];
            throw NonFiniteIntegrand(msg.str());
        }
    }
    return grid.weight() * pairwise_sum(values);
}

struct PatchedIntegral {
    std::vector<double> outer_nodes;
    std::vector<double> inner; // inner integral over p at each outer node
    double outer;              // integral over q of `inner`
};

/// Double integral of kernel(q, p) over the torus where the kernel has a
/// removable singularity on energy(p) == energy(q). Inner nodes within `tol_eps`
/// in energy of the outer node use limit(q) instead of the kernel. The outer grid
/// is the midpoint grid, the inner grid is offset by half a step.
template <class Kernel, class Limit, class Energy>
PatchedIntegral double_integral_patched(Kernel&& kernel, Limit&& limit, Energy&& energy,
                                        std::size_t outer_size, std::size_t inner_size,
                                        double tol_eps = kDefaultTolEps) {
    const QuadratureGrid qgrid = QuadratureGrid::midpoint(outer_size);
    const QuadratureGrid pgrid = QuadratureGrid::offset(inner_size);
    std::vector<double> ep(inner_size);
    for (std::size_t j = 0; j < inner_size; ++j) ep[j] = energy(pgrid[j]);

    PatchedIntegral out;
    out.outer_nodes = qgrid.points();
    out.inner.resize(outer_size);
    std::vector<double> row(inner_size);
    for (std::size_t i = 0; i < outer_size; ++i) {
        const double q = qgrid[i];
        const double eq = energy(q);
        for (std::size_t j = 0; j < inner_size; ++j) {
            const double p = pgrid[j];
            double v;
            if (std::fabs(ep[j] - eq) > tol_eps) {
                v = kernel(q, p);
                if (!std::isfinite(v)) {
                    std::ostringstream msg;
                    msg << "kernel is " << v << " at (q, p) = (" << q << ", " << p << ")";
                    throw SingularKernel(msg.str());
                }
            } else {
                v = limit(q);
            }
            row[j] = v;
        }
        out.inner[i] = pgrid.weight() * pairwise_sum(row);
    }
    out.outer = qgrid.weight() * pairwise_sum(out.inner);
    return out;
}

} // namespace dw::numerics
