#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dw::numerics {

struct Segment {
    double x0, y0, x1, y1;
    std::size_t cell_x, cell_y; // lower-left node of the cell the segment crosses
};

/// Marching squares over a rectangular grid. `values` is row-major with y as the
/// slow index: values[iy * xs.size() + ix]. Crossings are placed by linear
/// interpolation along cell edges; a node counts as above when value > level.
/// Saddle cells are resolved by the cell-centre average.
std::vector<Segment> extract_level_set(std::span<const double> xs, std::span<const double> ys,
                                       std::span<const double> values, double level = 1.0);

} // namespace dw::numerics
