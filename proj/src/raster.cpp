#include "steinerlab/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace steinerlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Grid empty_grid(double h, std::int64_t i0, std::int64_t j0, std::int64_t i1, std::int64_t j1) {
    Grid g;
    g.h = h;
    g.i0 = i0;
    g.j0 = j0;
    g.nx = static_cast<int>(i1 - i0 + 1);
    g.ny = static_cast<int>(j1 - j0 + 1);
    g.mask.assign(static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny), 0);
    return g;
}

std::int64_t floor_index(double v, double h) { return static_cast<std::int64_t>(std::floor(v / h)); }

void set_cell(Grid& g, std::int64_t gi, std::int64_t gj) {
    const std::int64_t i = gi - g.i0, j = gj - g.j0;
    if (i < 0 || j < 0 || i >= g.nx || j >= g.ny) return;
    g.mask[static_cast<std::size_t>(j) * static_cast<std::size_t>(g.nx) + static_cast<std::size_t>(i)] = 1;
}

// Marks the cells a segment meets, row band by row band. With open_cells,
// only cells whose interior meets the segment count, so boundaries lying on
// grid lines do not spill into the exterior neighbour.
void cover_segment(Grid& g, Point a, Point b, bool open_cells) {
    const double h = g.h;
    if (a.y > b.y) std::swap(a, b);
    auto first_cell = [&](double v) { return floor_index(v, h); };
    // Open cell I meets [lo, hi] iff I h < hi and (I + 1) h > lo; a degenerate
    // range on a grid line meets none.
    auto last_cell = [&](double hi) {
        return open_cells ? static_cast<std::int64_t>(std::ceil(hi / h)) - 1 : floor_index(hi, h);
    };
    const std::int64_t ja = first_cell(a.y), jb = last_cell(b.y);
    for (std::int64_t J = ja; J <= jb; ++J) {
        double xa = a.x, xb = b.x;
        if (b.y > a.y) {
            const double ylo = std::max(a.y, static_cast<double>(J) * h);
            const double yhi = std::min(b.y, static_cast<double>(J + 1) * h);
            xa = a.x + (ylo - a.y) / (b.y - a.y) * (b.x - a.x);
            xb = a.x + (yhi - a.y) / (b.y - a.y) * (b.x - a.x);
        }
        if (xa > xb) std::swap(xa, xb);
        for (std::int64_t I = first_cell(xa); I <= last_cell(xb); ++I) set_cell(g, I, J);
    }
}

// Centers strictly or weakly inside the regions, by even-odd scanlines.
void fill_interior(Grid& g, const CompactSet& set) {
    std::vector<std::pair<Point, Point>> edges;
    for (const auto& r : set.regions) {
        auto add = [&](const Ring& ring) {
            const auto& v = ring.vertices;
            for (std::size_t k = 0; k < v.size(); ++k) edges.emplace_back(v[k], v[(k + 1) % v.size()]);
        };
        add(r.outer);
        for (const auto& hole : r.holes) add(hole);
    }
    if (edges.empty()) return;
    std::vector<double> xs;
    for (int j = 0; j < g.ny; ++j) {
        const double yc = (static_cast<double>(g.j0 + j) + 0.5) * g.h;
        xs.clear();
        for (const auto& [a, b] : edges) {
            if ((a.y > yc) != (b.y > yc)) xs.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            const auto first = static_cast<std::int64_t>(std::ceil(xs[k] / g.h - 0.5));
            const auto last = static_cast<std::int64_t>(std::floor(xs[k + 1] / g.h - 0.5));
            for (std::int64_t I = first; I <= last; ++I) set_cell(g, I, g.j0 + j);
        }
    }
}

// Squared-distance lower envelope along one line (Felzenszwalb-Huttenlocher).
void envelope_1d(const double* f, double* out, int n, std::vector<int>& v, std::vector<double>& z) {
    v.assign(static_cast<std::size_t>(n), 0);
    z.assign(static_cast<std::size_t>(n) + 1, 0.0);
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[q] == kInf) continue;
        while (k >= 0) {
            const int p = v[static_cast<std::size_t>(k)];
            const double s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
            if (s <= z[static_cast<std::size_t>(k)]) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        if (k > 0) {
            const int p = v[static_cast<std::size_t>(k - 1)];
            z[static_cast<std::size_t>(k)] = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
        } else {
            z[0] = -kInf;
        }
        v[static_cast<std::size_t>(k)] = q;
        z[static_cast<std::size_t>(k) + 1] = kInf;
    }
    if (k < 0) {
        std::fill(out, out + n, kInf);
        return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (z[static_cast<std::size_t>(j) + 1] < q) ++j;
        const int p = v[static_cast<std::size_t>(j)];
        out[q] = double(q - p) * (q - p) + f[p];
    }
}

// Copies the mask of g into a grid with frame `frame`, which must cover g.
Grid embed(const Grid& g, const Grid& frame) {
    Grid out = frame;
    std::fill(out.mask.begin(), out.mask.end(), 0);
    const std::int64_t di = g.i0 - frame.i0, dj = g.j0 - frame.j0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (g.on(i, j)) {
                out.mask[static_cast<std::size_t>(j + dj) * static_cast<std::size_t>(out.nx) + static_cast<std::size_t>(i + di)] = 1;
            }
        }
    }
    return out;
}

}  // namespace

std::size_t Grid::count() const { return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1})); }

Grid rasterize(const CompactSet& set, double h, double pad) {
    if (!(h > 0.0) || !std::isfinite(h)) throw GeometryError("raster cell size must be positive");
    if (set.empty()) throw GeometryError("cannot rasterize an empty set");
    const BoundingBox bb = bounding_box(set);
    Grid g = empty_grid(h, floor_index(bb.lo.x - pad, h) - 1, floor_index(bb.lo.y - pad, h) - 1,
                        floor_index(bb.hi.x + pad, h) + 1, floor_index(bb.hi.y + pad, h) + 1);
    fill_interior(g, set);
    for (const auto& r : set.regions) {
        auto trace = [&](const Ring& ring) {
            const auto& v = ring.vertices;
            for (std::size_t k = 0; k < v.size(); ++k) cover_segment(g, v[k], v[(k + 1) % v.size()], true);
        };
        trace(r.outer);
        for (const auto& hole : r.holes) trace(hole);
    }
    for (const auto& c : set.chains) {
        for (const auto& s : c.segments) cover_segment(g, s.a, s.b, false);
    }
    return g;
}

Grid padded(const Grid& g, double pad) {
    const auto k = static_cast<std::int64_t>(std::ceil(pad / g.h)) + 1;
    const Grid frame = empty_grid(g.h, g.i0 - k, g.j0 - k, g.i0 + g.nx - 1 + k, g.j0 + g.ny - 1 + k);
    return embed(g, frame);
}

DistanceField distance_transform(const Grid& g) {
    DistanceField f;
    f.h = g.h;
    f.i0 = g.i0;
    f.j0 = g.j0;
    f.nx = g.nx;
    f.ny = g.ny;
    const std::size_t nx = static_cast<std::size_t>(g.nx), ny = static_cast<std::size_t>(g.ny);
    std::vector<double> sq(nx * ny);
    for (std::size_t k = 0; k < sq.size(); ++k) sq[k] = g.mask[k] ? 0.0 : kInf;

    std::vector<int> v;
    std::vector<double> z, in(std::max(nx, ny)), out(std::max(nx, ny));
    for (std::size_t j = 0; j < ny; ++j) {
        std::copy(sq.begin() + static_cast<std::ptrdiff_t>(j * nx), sq.begin() + static_cast<std::ptrdiff_t>((j + 1) * nx), in.begin());
        envelope_1d(in.data(), out.data(), g.nx, v, z);
        std::copy(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(nx), sq.begin() + static_cast<std::ptrdiff_t>(j * nx));
    }
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) in[j] = sq[j * nx + i];
        envelope_1d(in.data(), out.data(), g.ny, v, z);
        for (std::size_t j = 0; j < ny; ++j) sq[j * nx + i] = out[j];
    }
    f.d.resize(sq.size());
    for (std::size_t k = 0; k < sq.size(); ++k) f.d[k] = std::sqrt(sq[k]) * g.h;
    return f;
}

Grid parallel_set(const Grid& g, double delta) {
    if (delta < 0.0) throw GeometryError("parallel set radius must be nonnegative");
    if (delta == 0.0) return g;
    Grid out = padded(g, delta);
    const DistanceField f = distance_transform(out);
    // Cell-center distances are h * sqrt(integer); absorb rounding at delta.
    const double limit = delta + 1e-12 * g.h;
    for (std::size_t k = 0; k < out.mask.size(); ++k) out.mask[k] = f.d[k] <= limit ? 1 : 0;
    return out;
}

double hausdorff(const Grid& a, const Grid& b) {
    if (std::abs(a.h - b.h) > 1e-12 * a.h) throw GeometryError("hausdorff: grids have different cell sizes");
    if (a.count() == 0 || b.count() == 0) throw GeometryError("hausdorff: empty grid");
    const std::int64_t i0 = std::min(a.i0, b.i0), j0 = std::min(a.j0, b.j0);
    const std::int64_t i1 = std::max(a.i0 + a.nx, b.i0 + b.nx) - 1;
    const std::int64_t j1 = std::max(a.j0 + a.ny, b.j0 + b.ny) - 1;
    const Grid frame = empty_grid(a.h, i0, j0, i1, j1);
    const Grid ea = embed(a, frame), eb = embed(b, frame);
    const DistanceField da = distance_transform(ea), db = distance_transform(eb);
    double best = 0.0;
    for (std::size_t k = 0; k < frame.mask.size(); ++k) {
        if (ea.mask[k]) best = std::max(best, db.d[k]);
        if (eb.mask[k]) best = std::max(best, da.d[k]);
    }
    return best;
}

double raster_hausdorff(const CompactSet& a, const CompactSet& b, double h) {
    return hausdorff(rasterize(a, h), rasterize(b, h));
}

double outside_ball_area(const Grid& parallel, const Ball& ball) {
    std::size_t n = 0;
    for (int j = 0; j < parallel.ny; ++j) {
        for (int i = 0; i < parallel.nx; ++i) {
            if (parallel.on(i, j) && dist(parallel.center(i, j), ball.center) > ball.radius) ++n;
        }
    }
    return static_cast<double>(n) * parallel.h * parallel.h;
}

double monitor_value(const Grid& g, double delta, const Ball& ball) {
    return outside_ball_area(parallel_set(g, delta), ball);
}

void write_pgm(const Grid& g, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << "P5\n" << g.nx << " " << g.ny << "\n255\n";
    std::vector<char> row(static_cast<std::size_t>(g.nx));
    for (int j = g.ny - 1; j >= 0; --j) {
        for (int i = 0; i < g.nx; ++i) row[static_cast<std::size_t>(i)] = g.on(i, j) ? char(255) : char(0);
        os.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
}

void write_distance_field(const DistanceField& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    char header[160];
    const Point o{static_cast<double>(f.i0) * f.h, static_cast<double>(f.j0) * f.h};
    std::snprintf(header, sizeof header, "%d %d %.17g %.17g %.17g\n", f.nx, f.ny, f.h, o.x, o.y);
    os << header;
    for (double v : f.d) {
        unsigned char bytes[8];
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        for (int k = 0; k < 8; ++k) bytes[k] = static_cast<unsigned char>(bits >> (8 * k));
        os.write(reinterpret_cast<const char*>(bytes), 8);
    }
}

}  // namespace steinerlab
