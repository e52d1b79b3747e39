#include "steinerlab/clip.hpp"

#include <algorithm>
#include <vector>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

namespace steinerlab {

namespace bg = boost::geometry;

namespace {

using BPoint = bg::model::d2::point_xy<double>;
using BPolygon = bg::model::polygon<BPoint, /*clockwise=*/false, /*closed=*/false>;
using BMulti = bg::model::multi_polygon<BPolygon>;

BPolygon to_boost(const Region& r) {
    BPolygon poly;
    for (const Point& p : r.outer.vertices) poly.outer().emplace_back(p.x, p.y);
    for (const auto& h : r.holes) {
        poly.inners().emplace_back();
        for (const Point& p : h.vertices) poly.inners().back().emplace_back(p.x, p.y);
    }
    return poly;
}

BMulti to_boost(const CompactSet& s) {
    BMulti m;
    for (const auto& r : s.regions) m.push_back(to_boost(r));
    if (m.size() > 1 && !bg::is_valid(m)) {
        // Regions sharing edges are legal for us but not for OGC multipolygons.
        BMulti acc;
        for (const auto& p : m) {
            BMulti next;
            bg::union_(acc, p, next);
            acc = std::move(next);
        }
        return acc;
    }
    return m;
}

Ring ring_from(const bg::model::ring<BPoint, false, false>& r) {
    std::vector<Point> pts;
    pts.reserve(r.size());
    for (const auto& p : r) pts.push_back({p.x(), p.y()});
    return make_ring(std::move(pts));
}

bool is_sliver(const Ring& r) {
    if (r.size() < 3) return true;
    const double a = std::abs(signed_area(r));
    const double p = perimeter(r);
    return p == 0.0 || 2.0 * a / p < kGeomEps;
}

CompactSet from_boost(const BMulti& m) {
    CompactSet out;
    for (const auto& poly : m) {
        Ring outer = ring_from(poly.outer());
        if (is_sliver(outer)) continue;
        std::vector<Ring> holes;
        for (const auto& in : poly.inners()) {
            Ring h = ring_from(in);
            if (!is_sliver(h)) holes.push_back(std::move(h));
        }
        out.regions.push_back(make_region(std::move(outer), std::move(holes)));
    }
    return out;
}


using BLine = bg::model::linestring<BPoint>;
using BMultiLine = bg::model::multi_linestring<BLine>;

// Exact area of {p : keep(p in a, p in b)} by a vertical trapezoid sweep.
// Membership is even-odd over all ring edges of a set. Slabs are cut at every
// vertex abscissa and at every crossing of an a-edge with a b-edge, so the
// section length is linear on each piece and the trapezoid rule is exact.
// Near-coincident boundaries, which make the polygon overlay crawl, cost
// nothing extra here.
struct SweepEdge {
    double x0, y0, x1, y1;
    bool of_b;
    double y(double x) const {
        if (x <= x0) return y0;
        if (x >= x1) return y1;
        return y0 + (y1 - y0) * ((x - x0) / (x1 - x0));
    }
};

void collect_edges(const CompactSet& s, bool of_b, std::vector<SweepEdge>& out) {
    auto ring = [&](const Ring& r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            Point p = r.vertices[i], q = r.vertices[(i + 1) % r.size()];
            if (p.x == q.x) continue;
            if (p.x > q.x) std::swap(p, q);
            out.push_back({p.x, p.y, q.x, q.y, of_b});
        }
    };
    for (const auto& reg : s.regions) {
        ring(reg.outer);
        for (const auto& h : reg.holes) ring(h);
    }
}

template <class Keep>
double sweep_area(const CompactSet& a, const CompactSet& b, Keep keep) {
    std::vector<SweepEdge> edges;
    collect_edges(a, false, edges);
    collect_edges(b, true, edges);
    if (edges.empty()) return 0.0;
    std::sort(edges.begin(), edges.end(), [](const SweepEdge& e, const SweepEdge& f) { return e.x0 < f.x0; });
    std::vector<double> xs;
    xs.reserve(2 * edges.size());
    for (const auto& e : edges) {
        xs.push_back(e.x0);
        xs.push_back(e.x1);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<const SweepEdge*> active, order;
    std::vector<double> cuts;
    std::size_t next = 0;
    double total = 0.0;
    auto section = [&](double x) {
        double len = 0.0;
        bool in_a = false, in_b = false;
        for (std::size_t k = 0; k + 1 < order.size(); ++k) {
            (order[k]->of_b ? in_b : in_a) ^= true;
            if (keep(in_a, in_b)) len += order[k + 1]->y(x) - order[k]->y(x);
        }
        return len;
    };
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double xl = xs[i], xr = xs[i + 1];
        active.erase(std::remove_if(active.begin(), active.end(), [&](const SweepEdge* e) { return e->x1 <= xl; }),
                     active.end());
        while (next < edges.size() && edges[next].x0 <= xl) active.push_back(&edges[next++]);
        if (active.empty()) continue;

        cuts.assign({xl, xr});
        for (const SweepEdge* e : active) {
            if (e->of_b) continue;
            const double el = e->y(xl), er = e->y(xr);
            for (const SweepEdge* f : active) {
                if (!f->of_b) continue;
                const double dl = el - f->y(xl), dr = er - f->y(xr);
                if ((dl < 0 && dr > 0) || (dl > 0 && dr < 0)) {
                    cuts.push_back(std::clamp(xl + (xr - xl) * (dl / (dl - dr)), xl, xr));
                }
            }
        }
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            const double c0 = cuts[c], c1 = cuts[c + 1];
            if (!(c1 > c0)) continue;
            const double mid = 0.5 * (c0 + c1);
            order = active;
            std::sort(order.begin(), order.end(),
                      [mid](const SweepEdge* e, const SweepEdge* f) { return e->y(mid) < f->y(mid); });
            total += 0.5 * (c1 - c0) * (section(c0) + section(c1));
        }
    }
    return total;
}

}  // namespace

CompactSet intersect(const CompactSet& a, const CompactSet& b) {
    BMulti out;
    bg::intersection(to_boost(a), to_boost(b), out);
    return from_boost(out);
}

CompactSet difference(const CompactSet& a, const CompactSet& b) {
    BMulti out;
    bg::difference(to_boost(a), to_boost(b), out);
    return from_boost(out);
}

CompactSet unite(const CompactSet& a, const CompactSet& b) {
    BMulti out;
    bg::union_(to_boost(a), to_boost(b), out);
    return from_boost(out);
}

double difference_area(const CompactSet& a, const CompactSet& b) {
    if (a.regions.empty()) return 0.0;
    if (b.regions.empty()) return area(a);
    return sweep_area(a, b, [](bool in_a, bool in_b) { return in_a && !in_b; });
}

double symdiff_area(const CompactSet& a, const CompactSet& b) {
    return sweep_area(a, b, [](bool in_a, bool in_b) { return in_a != in_b; });
}

CompactSet outer_parallel_set(const CompactSet& set, double delta, int points_per_circle) {
    if (!(delta > 0.0)) return set;
    const bg::strategy::buffer::distance_symmetric<double> dist(delta);
    const bg::strategy::buffer::join_round join(points_per_circle);
    const bg::strategy::buffer::end_round end(points_per_circle);
    const bg::strategy::buffer::point_circle circle(points_per_circle);
    const bg::strategy::buffer::side_straight side;

    BMulti acc;
    if (!set.regions.empty()) bg::buffer(to_boost(set), acc, dist, side, join, end, circle);
    for (const auto& c : set.chains) {
        for (const auto& s : c.segments) {
            BMulti piece, next;
            if (s.is_point()) {
                bg::buffer(BPoint(s.a.x, s.a.y), piece, dist, side, join, end, circle);
            } else {
                BLine line{BPoint(s.a.x, s.a.y), BPoint(s.b.x, s.b.y)};
                bg::buffer(line, piece, dist, side, join, end, circle);
            }
            bg::union_(acc, piece, next);
            acc = std::move(next);
        }
    }
    return from_boost(acc);
}

bool segment_covered(const Segment& seg, const CompactSet& set, double tol) {
    if (seg.is_point()) return distance_to_set(set, seg.a) <= tol;

    // Parameter intervals of seg that lie inside regions or near chains.
    const Point d = seg.b - seg.a;
    const double len = norm(d);
    std::vector<double> cuts{0.0, 1.0};
    auto add_edge_cuts = [&](Point p, Point q) {
        const Point e = q - p;
        const double den = cross(d, e);
        if (den != 0.0) {
            const double t = cross(p - seg.a, e) / den;
            const double s = cross(p - seg.a, d) / den;
            if (t > 0.0 && t < 1.0 && s >= -1e-12 && s <= 1.0 + 1e-12) cuts.push_back(t);
        }
        // Endpoints of nearby edges bound coverage runs too.
        for (Point v : {p, q}) {
            const double t = dot(v - seg.a, d) / (len * len);
            if (t > 0.0 && t < 1.0) cuts.push_back(t);
        }
    };
    for (const auto& r : set.regions) {
        auto scan = [&](const Ring& ring) {
            const auto& v = ring.vertices;
            for (std::size_t i = 0; i < v.size(); ++i) add_edge_cuts(v[i], v[(i + 1) % v.size()]);
        };
        scan(r.outer);
        for (const auto& h : r.holes) scan(h);
    }
    for (const auto& c : set.chains) {
        for (const auto& s : c.segments) add_edge_cuts(s.a, s.b);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // Distance to a polygonal set is convex on each piece between cuts only
    // piecewise, so test piece endpoints and midpoints against tol.
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        if (distance_to_set(set, seg.a + cuts[i] * d) > tol) return false;
        if (i + 1 < cuts.size()) {
            const double tm = 0.5 * (cuts[i] + cuts[i + 1]);
            if (distance_to_set(set, seg.a + tm * d) > tol) return false;
        }
    }
    return true;
}

bool contains(const CompactSet& a, const CompactSet& b) {
    if (!b.regions.empty()) {
        const double outside = difference_area(b, a);
        if (outside > kGeomEps * std::max(1.0, area(b))) return false;
    }
    for (const auto& c : b.chains) {
        for (const auto& s : c.segments) {
            if (!segment_covered(s, a, kGeomEps)) return false;
        }
    }
    return true;
}

}  // namespace steinerlab
