#include "steinerlab/random_sets.hpp"

#include <algorithm>

namespace steinerlab {

CompactSet random_star_polygon(Rng& rng, Point center, double rmin, double rmax, int n) {
    n = std::max(n, 5);
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(n));
    const double phase = rng.uniform(0.0, kTwoPi);
    for (int k = 0; k < n; ++k) {
        const double t = phase + kTwoPi * (k + 0.8 * rng.uniform()) / n;
        const double r = rng.uniform(rmin, rmax);
        pts.push_back({center.x + r * std::cos(t), center.y + r * std::sin(t)});
    }
    return make_polygon_set(std::move(pts));
}

CompactSet random_convex_polygon(Rng& rng, Point center, double radius, int n) {
    std::vector<Point> pts;
    for (int k = 0; k < std::max(n, 3) * 2; ++k) {
        const double t = rng.uniform(0.0, kTwoPi);
        const double r = radius * std::sqrt(rng.uniform(0.2, 1.0));
        pts.push_back({center.x + r * std::cos(t), center.y + r * std::sin(t)});
    }
    auto hull = convex_hull(pts);
    while (hull.size() < 3) {
        hull = {{center.x - radius, center.y}, {center.x + radius, center.y}, {center.x, center.y + radius}};
    }
    return make_polygon_set(std::move(hull));
}

Direction random_direction(Rng& rng) { return Direction(rng.uniform(0.0, kTwoPi)); }

CompactSet random_compact_set(Rng& rng) {
    CompactSet s;
    const int k = rng.uniform_int(1, 3);
    for (int i = 0; i < k; ++i) {
        const Point c{2.5 * i + rng.uniform(-0.2, 0.2), rng.uniform(-0.5, 0.5)};
        const double rmin = rng.uniform(0.3, 0.6);
        const double rmax = rng.uniform(rmin + 0.05, 1.0);
        CompactSet star = random_star_polygon(rng, c, rmin, rmax, rng.uniform_int(5, 24));
        if (rng.chance(0.25)) {
            CompactSet hole = random_convex_polygon(rng, c, 0.3 * rmin, rng.uniform_int(3, 8));
            Ring h = hole.regions[0].outer;
            std::reverse(h.vertices.begin(), h.vertices.end());
            star.regions[0].holes.push_back(std::move(h));
        }
        s = merge_disjoint(s, star);
    }
    if (rng.chance(0.3)) {
        const Point a{rng.uniform(-1.5, 2.5 * k), rng.uniform(-1.5, 1.5)};
        const Point b{a.x + rng.uniform(-1.0, 1.0), a.y + rng.uniform(-1.0, 1.0)};
        s.chains.push_back(Chain{{Segment{a, b}}});
    }
    return s;
}

}  // namespace steinerlab
