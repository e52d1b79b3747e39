#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "steinerlab/geom.hpp"

namespace steinerlab {

/// Binary raster on the global lattice of cell size h: cell (i, j) covers
/// [(i0 + i) h, (i0 + i + 1) h] x [(j0 + j) h, (j0 + j + 1) h]. Grids with the
/// same h therefore share cell boundaries and can be compared cell by cell.
struct Grid {
    double h = 0.0;
    std::int64_t i0 = 0;
    std::int64_t j0 = 0;
    int nx = 0;
    int ny = 0;
    std::vector<std::uint8_t> mask;  // row-major, index j * nx + i

    Point origin() const { return {static_cast<double>(i0) * h, static_cast<double>(j0) * h}; }
    Point center(int i, int j) const {
        return {(static_cast<double>(i0 + i) + 0.5) * h, (static_cast<double>(j0 + j) + 0.5) * h};
    }
    bool on(int i, int j) const { return mask[static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i)] != 0; }
    std::size_t count() const;
    double area() const { return static_cast<double>(count()) * h * h; }
};

/// Per-cell Euclidean distance (physical units) from each cell center to
/// the nearest on-cell center. Infinite everywhere when the grid is empty.
struct DistanceField {
    double h = 0.0;
    std::int64_t i0 = 0;
    std::int64_t j0 = 0;
    int nx = 0;
    int ny = 0;
    std::vector<double> d;

    double at(int i, int j) const { return d[static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i)]; }
};

/// A cell is on when its center lies in a region, or when the closed cell
/// meets a region boundary or a chain. Every point of the set is then within
/// h/sqrt(2) of an on-cell center and vice versa. pad extra cells of margin
/// (in physical units) are added on every side.
Grid rasterize(const CompactSet& set, double h, double pad = 0.0);

/// Same grid extended by at least pad (physical units) on every side.
Grid padded(const Grid& g, double pad);

/// Exact Euclidean distance transform (lower envelope of parabolas, rows
/// then columns).
DistanceField distance_transform(const Grid& g);

/// Cells whose centers are within delta of an on-cell center; the grid is
/// padded so the dilation is never clipped.
Grid parallel_set(const Grid& g, double delta);

/// Hausdorff distance between on-cell centers of two grids with equal h.
double hausdorff(const Grid& a, const Grid& b);
/// Rasterizes both sets at h and compares; error <= h*sqrt(2) against the
/// exact distance of the sets.
double raster_hausdorff(const CompactSet& a, const CompactSet& b, double h);

/// h^2 times the number of cells of parallel_set(g, delta) whose centers lie
/// outside the closed analytic ball.
double monitor_value(const Grid& g, double delta, const Ball& ball);
/// Same, with the parallel set already computed.
double outside_ball_area(const Grid& parallel, const Ball& ball);

/// Binary PGM (P5), 255 for on-cells, top row first.
void write_pgm(const Grid& g, const std::string& path);
/// Text header "nx ny h x0 y0\n" followed by nx*ny little-endian float64
/// values, row-major from the bottom row.
void write_distance_field(const DistanceField& f, const std::string& path);

}  // namespace steinerlab
