#include "dw/numerics/level_set.hpp"

#include "dw/errors.hpp"

#include <array>
#include <cmath>

namespace dw::numerics {

namespace {
struct Point {
    double x, y;
};

Point crossing(double xa, double ya, double va, double xb, double yb, double vb, double level) {
    const double t = (level - va) / (vb - va);
    return {xa + t * (xb - xa), ya + t * (yb - ya)};
}
} // namespace

std::vector<Segment> extract_level_set(std::span<const double> xs, std::span<const double> ys,
                                       std::span<const double> values, double level) {
    const std::size_t nx = xs.size();
    const std::size_t ny = ys.size();
    if (nx < 2 || ny < 2) throw GridTooSmall("level-set extraction needs at least a 2x2 grid");
    if (values.size() != nx * ny) throw InvalidArgument("grid values do not match the axes");
    for (double v : values)
        if (!std::isfinite(v)) throw InvalidArgument("grid values must be finite");

    std::vector<Segment> out;
    for (std::size_t iy = 0; iy + 1 < ny; ++iy) {
        for (std::size_t ix = 0; ix + 1 < nx; ++ix) {
            // Corners counter-clockwise from lower-left.
            const std::array<double, 4> v = {values[iy * nx + ix], values[iy * nx + ix + 1],
                                             values[(iy + 1) * nx + ix + 1], values[(iy + 1) * nx + ix]};
            const std::array<double, 4> cx = {xs[ix], xs[ix + 1], xs[ix + 1], xs[ix]};
            const std::array<double, 4> cy = {ys[iy], ys[iy], ys[iy + 1], ys[iy + 1]};
            std::array<bool, 4> above{};
            int count = 0;
            for (int c = 0; c < 4; ++c) {
                above[c] = v[c] > level;
                count += above[c];
            }
            if (count == 0 || count == 4) continue;

            // Edge e joins corner e and corner (e+1)%4.
            std::array<Point, 4> pts{};
            std::array<bool, 4> cut{};
            for (int e = 0; e < 4; ++e) {
                const int a = e, b = (e + 1) % 4;
                cut[e] = above[a] != above[b];
                if (cut[e]) pts[e] = crossing(cx[a], cy[a], v[a], cx[b], cy[b], v[b], level);
            }
            auto emit = [&](int e0, int e1) {
                out.push_back({pts[e0].x, pts[e0].y, pts[e1].x, pts[e1].y, ix, iy});
            };

            const bool saddle = count == 2 && above[0] == above[2];
            if (!saddle) {
                int first = -1;
                for (int e = 0; e < 4; ++e) {
                    if (!cut[e]) continue;
                    if (first < 0) {
                        first = e;
                    } else {
                        emit(first, e);
                        break;
                    }
                }
                continue;
            }
            const bool centre_above = 0.25 * (v[0] + v[1] + v[2] + v[3]) > level;
            // Isolate the corners that differ from the centre.
            if (above[0] != centre_above) {
                emit(3, 0); // around corner 0
                emit(1, 2); // around corner 2
            } else {
                emit(0, 1); // around corner 1
                emit(2, 3); // around corner 3
            }
        }
    }
    return out;
}

} // namespace dw::numerics
