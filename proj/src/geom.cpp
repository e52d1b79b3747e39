#include "steinerlab/geom.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace steinerlab {

double normalize_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;
    return t;
}

Direction Direction::from_vector(Point v) {
    if (!(norm(v) > 0.0)) throw GeometryError("direction from zero vector");
    return Direction(std::atan2(v.y, v.x));
}

double signed_area(const Ring& ring) {
    const auto& v = ring.vertices;
    const std::size_t n = v.size();
    if (n < 3) return 0.0;
    // Shifting to the first vertex keeps cancellation small for offset rings.
    const Point o = v[0];
    double s = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) s += cross(v[i] - o, v[i + 1] - o);
    return 0.5 * s;
}

double perimeter(const Ring& ring) {
    const auto& v = ring.vertices;
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += dist(v[i], v[(i + 1) % v.size()]);
    return s;
}

bool CompactSet::empty() const {
    return regions.empty() &&
           std::all_of(chains.begin(), chains.end(),
                       [](const Chain& c) { return c.segments.empty(); });
}

std::size_t CompactSet::vertex_count() const {
    std::size_t n = 0;
    for (const auto& r : regions) {
        n += r.outer.size();
        for (const auto& h : r.holes) n += h.size();
    }
    for (const auto& c : chains) n += 2 * c.segments.size();
    return n;
}

void BoundingBox::expand(Point p) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
}

Ring make_ring(std::vector<Point> vertices) {
    // Drop a closing duplicate and consecutive repeats.
    std::vector<Point> out;
    out.reserve(vertices.size());
    for (const Point& p : vertices) {
        if (out.empty() || !(out.back() == p)) out.push_back(p);
    }
    while (out.size() > 1 && out.front() == out.back()) out.pop_back();
    return Ring{std::move(out)};
}

Region make_region(Ring outer, std::vector<Ring> holes) {
    if (signed_area(outer) < 0.0) std::reverse(outer.vertices.begin(), outer.vertices.end());
    for (auto& h : holes) {
        if (signed_area(h) > 0.0) std::reverse(h.vertices.begin(), h.vertices.end());
    }
    return Region{std::move(outer), std::move(holes)};
}

CompactSet make_set(std::vector<Region> regions, std::vector<Chain> chains) {
    CompactSet s;
    s.regions.reserve(regions.size());
    for (auto& r : regions) s.regions.push_back(make_region(std::move(r.outer), std::move(r.holes)));
    s.chains = std::move(chains);
    return s;
}

CompactSet make_polygon_set(std::vector<Point> outer) {
    CompactSet s;
    s.regions.push_back(make_region(make_ring(std::move(outer))));
    return s;
}

namespace {

int orient(Point a, Point b, Point c) {
    const double v = cross(b - a, c - a);
    const double scale = std::max({norm(b - a), norm(c - a), 1e-300});
    if (std::abs(v) <= 1e-14 * scale * scale) return 0;
    return v > 0 ? 1 : -1;
}

bool on_segment(Point a, Point b, Point p) {
    return std::min(a.x, b.x) - kGeomEps <= p.x && p.x <= std::max(a.x, b.x) + kGeomEps &&
           std::min(a.y, b.y) - kGeomEps <= p.y && p.y <= std::max(a.y, b.y) + kGeomEps;
}

// Edge reference used by the crossing scan in validate().
struct EdgeRef {
    Point a, b;
    int ring;          // global ring id
    std::size_t idx;   // edge index in ring
    std::size_t ring_size;
    double xmin, xmax;
};

bool adjacent(const EdgeRef& e, const EdgeRef& f) {
    if (e.ring != f.ring) return false;
    const std::size_t n = e.ring_size;
    return (e.idx + 1) % n == f.idx || (f.idx + 1) % n == e.idx;
}

// True when the edges share more than an allowed contact.
bool bad_contact(const EdgeRef& e, const EdgeRef& f) {
    const int o1 = orient(e.a, e.b, f.a);
    const int o2 = orient(e.a, e.b, f.b);
    const int o3 = orient(f.a, f.b, e.a);
    const int o4 = orient(f.a, f.b, e.b);
    const bool proper = o1 * o2 < 0 && o3 * o4 < 0;
    if (proper) return true;
    if (e.ring != f.ring) return false;  // touching across rings is allowed
    if (adjacent(e, f)) {
        // Adjacent edges may only share their common vertex; a fold-back
        // (collinear overlap) is a self-intersection.
        if (o1 == 0 && o2 == 0) {
            const Point d1 = e.b - e.a, d2 = f.b - f.a;
            return dot(d1, d2) < 0.0;
        }
        return false;
    }
    return (o1 == 0 && on_segment(e.a, e.b, f.a)) || (o2 == 0 && on_segment(e.a, e.b, f.b)) ||
           (o3 == 0 && on_segment(f.a, f.b, e.a)) || (o4 == 0 && on_segment(f.a, f.b, e.b));
}

bool ring_contains_strict(const Ring& ring, Point p) {
    // Even-odd crossing test; boundary points report false.
    const auto& v = ring.vertices;
    bool inside = false;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        const Point a = v[j], b = v[i];
        if (orient(a, b, p) == 0 && on_segment(a, b, p)) return false;
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xc = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < xc) inside = !inside;
        }
    }
    return inside;
}

bool ring_contains_closed(const Ring& ring, Point p) {
    const auto& v = ring.vertices;
    bool inside = false;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        const Point a = v[j], b = v[i];
        if (distance_to_segment(p, {a, b}) <= kGeomEps) return true;
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xc = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < xc) inside = !inside;
        }
    }
    return inside;
}

std::string where(std::size_t region, int hole) {
    std::ostringstream os;
    os << "regions[" << region << "]";
    if (hole >= 0) os << ".holes[" << hole << "]";
    return os.str();
}

void validate_ring(const Ring& ring, const std::string& name) {
    if (ring.size() < 3) throw GeometryError(name + ": ring needs at least 3 vertices");
    for (std::size_t i = 0; i < ring.size(); ++i) {
        if (!is_finite(ring.vertices[i])) {
            throw GeometryError(name + ": vertex " + std::to_string(i) + " is not finite");
        }
    }
    if (std::abs(signed_area(ring)) <= 0.0) throw GeometryError(name + ": ring has zero area");
}

}  // namespace

void validate(const CompactSet& set) {
    if (set.empty()) throw GeometryError("set is empty: need at least one region or chain");

    std::vector<EdgeRef> edges;
    std::vector<std::string> ring_names;
    int ring_id = 0;
    for (std::size_t r = 0; r < set.regions.size(); ++r) {
        const Region& reg = set.regions[r];
        validate_ring(reg.outer, where(r, -1));
        if (signed_area(reg.outer) < 0.0) throw GeometryError(where(r, -1) + ": outer ring must be counterclockwise");
        for (std::size_t h = 0; h < reg.holes.size(); ++h) {
            validate_ring(reg.holes[h], where(r, static_cast<int>(h)));
            if (signed_area(reg.holes[h]) > 0.0) {
                throw GeometryError(where(r, static_cast<int>(h)) + ": hole must be clockwise");
            }
            for (const Point& p : reg.holes[h].vertices) {
                if (!ring_contains_strict(reg.outer, p)) {
                    throw GeometryError(where(r, static_cast<int>(h)) + ": hole not strictly inside outer ring");
                }
            }
        }
        auto add = [&](const Ring& ring) {
            const std::size_t n = ring.size();
            for (std::size_t i = 0; i < n; ++i) {
                const Point a = ring.vertices[i], b = ring.vertices[(i + 1) % n];
                edges.push_back({a, b, ring_id, i, n, std::min(a.x, b.x), std::max(a.x, b.x)});
            }
            ++ring_id;
        };
        add(reg.outer);
        ring_names.push_back(where(r, -1));
        for (std::size_t h = 0; h < reg.holes.size(); ++h) {
            add(reg.holes[h]);
            ring_names.push_back(where(r, static_cast<int>(h)));
        }
    }
    for (std::size_t c = 0; c < set.chains.size(); ++c) {
        for (std::size_t s = 0; s < set.chains[c].segments.size(); ++s) {
            const Segment& seg = set.chains[c].segments[s];
            if (!is_finite(seg.a) || !is_finite(seg.b)) {
                throw GeometryError("chains[" + std::to_string(c) + "].segments[" + std::to_string(s) +
                                    "]: coordinate is not finite");
            }
        }
    }

    // Sweep in x so only edges with overlapping x-ranges are compared.
    std::sort(edges.begin(), edges.end(), [](const EdgeRef& a, const EdgeRef& b) { return a.xmin < b.xmin; });
    for (std::size_t i = 0; i < edges.size(); ++i) {
        for (std::size_t j = i + 1; j < edges.size() && edges[j].xmin <= edges[i].xmax; ++j) {
            if (bad_contact(edges[i], edges[j])) {
                const auto& ei = edges[i];
                const auto& ej = edges[j];
                throw GeometryError("ring edges intersect: " + ring_names[static_cast<std::size_t>(ei.ring)] +
                                    " edge " + std::to_string(ei.idx) + " and " +
                                    ring_names[static_cast<std::size_t>(ej.ring)] + " edge " + std::to_string(ej.idx));
            }
        }
    }

    // With no crossings, overlapping interiors show up as a vertex strictly
    // inside another region.
    for (std::size_t a = 0; a < set.regions.size(); ++a) {
        for (std::size_t b = 0; b < set.regions.size(); ++b) {
            if (a == b) continue;
            const Region& ra = set.regions[a];
            const Region& rb = set.regions[b];
            for (const Point& p : ra.outer.vertices) {
                if (!ring_contains_strict(rb.outer, p)) continue;
                const bool in_hole = std::any_of(rb.holes.begin(), rb.holes.end(), [&](const Ring& h) {
                    return ring_contains_closed(h, p);
                });
                if (!in_hole) {
                    throw GeometryError(where(a, -1) + " overlaps " + where(b, -1));
                }
            }
        }
    }
}

double area(const Region& region) {
    double a = signed_area(region.outer);
    for (const auto& h : region.holes) a += signed_area(h);
    return a;
}

double area(const CompactSet& set) {
    double a = 0.0;
    for (const auto& r : set.regions) a += area(r);
    return a;
}

double perimeter(const CompactSet& set) {
    double p = 0.0;
    for (const auto& r : set.regions) {
        p += perimeter(r.outer);
        for (const auto& h : r.holes) p += perimeter(h);
    }
    return p;
}

std::vector<Point> all_vertices(const CompactSet& set) {
    std::vector<Point> pts;
    pts.reserve(set.vertex_count());
    for (const auto& r : set.regions) {
        pts.insert(pts.end(), r.outer.vertices.begin(), r.outer.vertices.end());
        for (const auto& h : r.holes) pts.insert(pts.end(), h.vertices.begin(), h.vertices.end());
    }
    for (const auto& c : set.chains) {
        for (const auto& s : c.segments) {
            pts.push_back(s.a);
            pts.push_back(s.b);
        }
    }
    return pts;
}

BoundingBox bounding_box(const CompactSet& set) {
    BoundingBox bb;
    for (const Point& p : all_vertices(set)) bb.expand(p);
    return bb;
}

std::vector<Point> convex_hull(std::span<const Point> points) {
    std::vector<Point> p(points.begin(), points.end());
    std::sort(p.begin(), p.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() < 3) return p;
    std::vector<Point> h(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && cross(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 0.0) --k;
        h[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 0.0) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    return h;
}

double diameter(const CompactSet& set) {
    const auto pts = all_vertices(set);
    const auto h = convex_hull(pts);
    const std::size_t n = h.size();
    if (n == 0) return 0.0;
    if (n == 1) return 0.0;
    if (n == 2) return dist(h[0], h[1]);
    // Rotating calipers over antipodal pairs.
    double best = 0.0;
    std::size_t j = 1;
    for (std::size_t i = 0; i < n; ++i) {
        const Point e = h[(i + 1) % n] - h[i];
        while (cross(e, h[(j + 1) % n] - h[j]) > 0.0) j = (j + 1) % n;
        best = std::max({best, dist(h[i], h[j]), dist(h[(i + 1) % n], h[j])});
    }
    return best;
}

double second_moment(const CompactSet& set, Point p) {
    // Fan decomposition from p: each triangle (p, a, b) contributes
    // cross(a,b)/12 * (|a|^2 + a.b + |b|^2) in coordinates relative to p.
    auto ring_moment = [p](const Ring& ring) {
        double s = 0.0;
        const auto& v = ring.vertices;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Point a = v[i] - p, b = v[(i + 1) % v.size()] - p;
            s += cross(a, b) * (dot(a, a) + dot(a, b) + dot(b, b));
        }
        return s / 12.0;
    };
    double m = 0.0;
    for (const auto& r : set.regions) {
        m += ring_moment(r.outer);
        for (const auto& h : r.holes) m += ring_moment(h);
    }
    return m;
}

Ball equimeasurable_ball(const CompactSet& set) {
    const double a = area(set);
    if (!(a > 0.0)) throw GeometryError("null set has no equimeasurable ball");
    return Ball{{0.0, 0.0}, std::sqrt(a / kPi)};
}

namespace {

template <class F>
CompactSet map_points(const CompactSet& set, F f, bool flips_orientation) {
    CompactSet out;
    out.regions.reserve(set.regions.size());
    auto map_ring = [&](const Ring& r) {
        Ring o;
        o.vertices.reserve(r.size());
        for (const Point& p : r.vertices) o.vertices.push_back(f(p));
        if (flips_orientation) std::reverse(o.vertices.begin(), o.vertices.end());
        return o;
    };
    for (const auto& r : set.regions) {
        Region reg;
        reg.outer = map_ring(r.outer);
        for (const auto& h : r.holes) reg.holes.push_back(map_ring(h));
        out.regions.push_back(std::move(reg));
    }
    out.chains.reserve(set.chains.size());
    for (const auto& c : set.chains) {
        Chain oc;
        oc.segments.reserve(c.segments.size());
        for (const auto& s : c.segments) oc.segments.push_back({f(s.a), f(s.b)});
        out.chains.push_back(std::move(oc));
    }
    return out;
}

}  // namespace

CompactSet rotate(const CompactSet& set, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return map_points(set, [c, s](Point p) { return Point{c * p.x - s * p.y, s * p.x + c * p.y}; }, false);
}

CompactSet translate(const CompactSet& set, Point v) {
    return map_points(set, [v](Point p) { return p + v; }, false);
}

CompactSet reflect(const CompactSet& set, Direction u) {
    const Point n = u.unit();
    return map_points(set, [n](Point p) { return p - 2.0 * dot(p, n) * n; }, true);
}

CompactSet scale(const CompactSet& set, double factor) {
    if (!(factor > 0.0)) throw GeometryError("scale factor must be positive");
    return map_points(set, [factor](Point p) { return factor * p; }, false);
}

double distance_to_segment(Point p, const Segment& s) {
    const Point d = s.b - s.a;
    const double len2 = dot(d, d);
    if (len2 == 0.0) return dist(p, s.a);
    const double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
    return dist(p, s.a + t * d);
}

bool region_contains(const CompactSet& set, Point p) {
    for (const auto& r : set.regions) {
        if (!ring_contains_closed(r.outer, p)) continue;
        const bool in_hole = std::any_of(r.holes.begin(), r.holes.end(),
                                         [&](const Ring& h) { return ring_contains_strict(h, p); });
        if (!in_hole) return true;
    }
    return false;
}

double distance_to_set(const CompactSet& set, Point p) {
    if (region_contains(set, p)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    auto scan_ring = [&](const Ring& r) {
        const auto& v = r.vertices;
        for (std::size_t i = 0; i < v.size(); ++i) best = std::min(best, distance_to_segment(p, {v[i], v[(i + 1) % v.size()]}));
    };
    for (const auto& r : set.regions) {
        scan_ring(r.outer);
        for (const auto& h : r.holes) scan_ring(h);
    }
    for (const auto& c : set.chains) {
        for (const auto& s : c.segments) best = std::min(best, distance_to_segment(p, s));
    }
    return best;
}

double convex_hull_area(const CompactSet& set) {
    const auto pts = all_vertices(set);
    const auto h = convex_hull(pts);
    return h.size() < 3 ? 0.0 : signed_area(Ring{h});
}

bool is_convex(const CompactSet& set, double angular_tol) {
    if (set.regions.size() != 1 || !set.regions[0].holes.empty()) return false;
    const auto& v = set.regions[0].outer.vertices;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = v[(i + n - 1) % n], b = v[i], c = v[(i + 1) % n];
        const Point e1 = b - a, e2 = c - b;
        const double l = norm(e1) * norm(e2);
        if (l == 0.0) continue;
        // sine of the turning angle; negative means a right (reflex) turn
        if (cross(e1, e2) / l < -angular_tol) return false;
    }
    return true;
}

CompactSet polygon_ball(Point center, double radius, int n, BallFit fit) {
    if (!(radius > 0.0)) throw GeometryError("ball radius must be positive");
    if (n < 3) throw GeometryError("ball polygon needs at least 3 vertices");
    const double R = fit == BallFit::inscribed ? radius : radius / std::cos(kPi / n);
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double t = kTwoPi * k / n;
        pts.push_back({center.x + R * std::cos(t), center.y + R * std::sin(t)});
    }
    return make_polygon_set(std::move(pts));
}

CompactSet segment_set(Point a, Point b) {
    CompactSet s;
    s.chains.push_back(Chain{{Segment{a, b}}});
    return s;
}

CompactSet merge_disjoint(const CompactSet& a, const CompactSet& b) {
    CompactSet s = a;
    s.regions.insert(s.regions.end(), b.regions.begin(), b.regions.end());
    s.chains.insert(s.chains.end(), b.chains.begin(), b.chains.end());
    return s;
}

}  // namespace steinerlab
