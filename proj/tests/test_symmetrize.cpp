#include "doctest.h"

#include <algorithm>

#include "steinerlab/clip.hpp"
#include "steinerlab/random_sets.hpp"
#include "steinerlab/symmetrize.hpp"

using namespace steinerlab;

namespace {

CompactSet unit_square() { return make_polygon_set({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }
CompactSet triangle() { return make_polygon_set({{0, 0}, {1, 0}, {0, 1}}); }

// Independent chord oracle: intersect the line {p . w = t} with every ring
// edge, sort the crossings along u and pair them even-odd.
double oracle_chord(const CompactSet& s, Direction u, double t) {
    const Point w = u.normal(), d = u.unit();
    std::vector<double> hits;
    auto scan = [&](const Ring& r) {
        const auto& v = r.vertices;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Point a = v[i], b = v[(i + 1) % v.size()];
            const double ta = dot(a, w), tb = dot(b, w);
            if ((ta <= t && t < tb) || (tb <= t && t < ta)) {
                const double f = (t - ta) / (tb - ta);
                hits.push_back(dot(a + f * (b - a), d));
            }
        }
    };
    for (const auto& reg : s.regions) {
        scan(reg.outer);
        for (const auto& h : reg.holes) scan(h);
    }
    std::sort(hits.begin(), hits.end());
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < hits.size(); i += 2) m += hits[i + 1] - hits[i];
    return m;
}

CompactSet regions_only(CompactSet s) {
    s.chains.clear();
    return s;
}

}  // namespace

TEST_CASE("chord function examples") {
    SUBCASE("unit square along e2") {
        const ChordFunction cf = chord_function(unit_square(), Direction(kPi / 2));
        CHECK(cf(0.5) == doctest::Approx(1.0));
        CHECK(cf(0.01) == doctest::Approx(1.0));
        CHECK(cf(1.5) == 0.0);
        CHECK(cf.integral() == doctest::Approx(1.0));
    }
    SUBCASE("triangle along e2 is 1 - t") {
        const ChordFunction cf = chord_function(triangle(), Direction(kPi / 2));
        for (double t : {0.1, 0.25, 0.5, 0.9}) CHECK(cf(t) == doctest::Approx(1.0 - t));
        CHECK(cf.integral() == doctest::Approx(0.5));
    }
    SUBCASE("chain parallel to u carries its length at one coordinate") {
        const ChordFunction cf = chord_function(segment_set({0, 0}, {0, 1}), Direction(kPi / 2));
        REQUIRE(cf.breakpoints.size() == 1);
        CHECK(cf(0.0) == doctest::Approx(1.0));
        CHECK(cf.integral() == 0.0);
        // the section carries the chain, so no separate null-set mark
        CHECK(cf.support_marks.empty());
    }
    SUBCASE("chain across u only leaves support marks") {
        const ChordFunction cf = chord_function(segment_set({0, 0}, {1, 0}), Direction(kPi / 2));
        REQUIRE(cf.support_marks.size() == 1);
        CHECK(cf.support_marks[0].first == doctest::Approx(0.0));
        CHECK(cf.support_marks[0].second == doctest::Approx(1.0));
        CHECK(cf(0.5) == 0.0);
    }
}

TEST_CASE("chord function agrees with the line-intersection oracle") {
    Rng rng(77);
    for (int i = 0; i < 300; ++i) {
        const CompactSet s = random_compact_set(rng);
        const Direction u = random_direction(rng);
        const ChordFunction cf = chord_function(s, u);
        CHECK(cf.integral() == doctest::Approx(area(s)).epsilon(1e-10));
        const double lo = cf.breakpoints.front(), hi = cf.breakpoints.back();
        for (int k = 0; k < 20; ++k) {
            const double t = rng.uniform(lo, hi);
            CHECK(std::abs(cf(t) - oracle_chord(s, u, t)) <= 1e-9);
        }
    }
}

TEST_CASE("symmetral examples") {
    SUBCASE("balls centered on u_perp are fixed") {
        // e2 is a symmetry axis of the polygon, so the fixed point is exact
        const CompactSet b = polygon_ball({0.7, 0}, 0.5, 256);
        const CompactSet sb = steiner_symmetral(b, Direction(kPi / 2));
        CHECK(symdiff_area(sb, b) < 1e-12);

        // in a generic direction the polygon changes only at the polygon defect
        const Direction u(0.3);
        const Point p = 1.3 * u.normal();
        const CompactSet b2 = polygon_ball(p, 0.5, 256);
        const double defect = kPi * 0.25 - area(b2);
        CHECK(symdiff_area(steiner_symmetral(b2, u), b2) <= 2 * defect);
        CHECK(contains(steiner_symmetral(b2, u), polygon_ball(p, 0.5 * std::cos(kPi / 256), 256, BallFit::inscribed)));
    }
    SUBCASE("segment at angle alpha to u_perp projects with factor cos alpha") {
        const Direction u(kPi / 2);  // u_perp is the x-axis
        for (double alpha : {0.1, 0.5, 1.0, 1.4}) {
            const CompactSet seg = segment_set({0, 0}, {std::cos(alpha), std::sin(alpha)});
            const CompactSet s = steiner_symmetral(seg, u);
            CHECK(s.regions.empty());
            REQUIRE(s.chains.size() == 1);
            REQUIRE(s.chains[0].segments.size() == 1);
            const Segment r = s.chains[0].segments[0];
            CHECK(r.length() == doctest::Approx(std::cos(alpha)).epsilon(1e-14));
            CHECK(std::abs(r.a.y) < 1e-15);
            CHECK(std::abs(r.b.y) < 1e-15);
        }
    }
    SUBCASE("triangle recenters its chords") {
        const CompactSet s = steiner_symmetral(triangle(), Direction(kPi / 2));
        CHECK(area(s) == doctest::Approx(0.5).epsilon(1e-15));
        REQUIRE(s.regions.size() == 1);
        const auto& v = s.regions[0].outer.vertices;
        CHECK(v.size() == 3);
        for (const Point& p : v) {
            // every vertex satisfies |s| = (1 - t)/2 on the boundary
            CHECK(std::abs(p.y) == doctest::Approx((1 - p.x) / 2));
        }
    }
    SUBCASE("square to centered square") {
        const CompactSet s = steiner_symmetral(unit_square(), Direction(kPi / 2));
        const BoundingBox bb = bounding_box(s);
        CHECK(bb.lo.y == doctest::Approx(-0.5));
        CHECK(bb.hi.y == doctest::Approx(0.5));
        CHECK(s.regions[0].outer.size() == 4);
    }
    SUBCASE("vertical chain becomes a centered chord") {
        const CompactSet s = steiner_symmetral(segment_set({2, 3}, {2, 5}), Direction(kPi / 2));
        REQUIRE(s.chains.size() == 1);
        const Segment r = s.chains[0].segments[0];
        CHECK(r.a.x == doctest::Approx(2.0));
        CHECK(r.a.y == doctest::Approx(-1.0));
        CHECK(r.b.y == doctest::Approx(1.0));
    }
    SUBCASE("chain inside a region chord is absorbed") {
        CompactSet k = polygon_ball({0, 0}, 0.3, 64);
        k.chains.push_back(Chain{{Segment{{0, -0.5}, {0, 0.5}}}});
        const CompactSet s = steiner_symmetral(k, Direction(0.0));  // horizontal lines
        // only the parts of the chain beyond the ball survive as axis pieces
        REQUIRE(s.chains.size() == 1);
        double len = 0.0;
        for (const auto& seg : s.chains[0].segments) len += seg.length();
        CHECK(len == doctest::Approx(1.0 - 0.6).epsilon(1e-3));
        CHECK(diameter(s) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("regions touching a line from both sides add a null chord") {
        // squares meeting at the line x = 1 with disjoint chords
        CompactSet k = merge_disjoint(make_polygon_set({{0, 0}, {1, 0}, {1, 1}, {0, 1}}),
                                      make_polygon_set({{1, 2}, {2, 2}, {2, 3}, {1, 3}}));
        const CompactSet s = steiner_symmetral(k, Direction(kPi / 2));
        REQUIRE(s.chains.size() == 1);
        CHECK(s.chains[0].segments[0].length() == doctest::Approx(2.0));
        CHECK(area(s) == doctest::Approx(2.0));
    }
    SUBCASE("isolated points map to the axis") {
        CompactSet pt;
        pt.chains.push_back(Chain{{Segment{{1, 1}, {1, 1}}}});
        const CompactSet s = steiner_symmetral(pt, Direction(kPi / 2));
        REQUIRE(s.chains.size() == 1);
        CHECK(s.chains[0].segments[0].is_point());
        CHECK(s.chains[0].segments[0].a.y == doctest::Approx(0.0));
    }
}

TEST_CASE("is_symmetric") {
    Rng rng(8);
    for (int i = 0; i < 30; ++i) {
        const CompactSet s = random_compact_set(rng);
        const Direction u = random_direction(rng);
        CHECK(is_symmetric(steiner_symmetral(s, u), u, 1e-8));
    }
    const CompactSet centered = make_polygon_set({{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}});
    CHECK(is_symmetric(centered, Direction(0.0), 1e-12));
    CHECK_FALSE(is_symmetric(translate(centered, {0.3, 0}), Direction(0.0), 0.01));
}

TEST_CASE("symmetral invariants on random sets") {
    Rng rng(99);
    for (int i = 0; i < 200; ++i) {
        const CompactSet a = random_compact_set(rng);
        const Direction u = random_direction(rng);
        const CompactSet sa = steiner_symmetral(a, u);
        CHECK_NOTHROW(validate(sa));
        CHECK(std::abs(area(sa) - area(a)) <= 1e-9 * std::max(1.0, area(a)));
        CHECK(symdiff_area(steiner_symmetral(sa, u), sa) <= 1e-8);

        const CompactSet b = translate(random_compact_set(rng), {rng.uniform(-1, 1), rng.uniform(-1, 1)});
        const CompactSet sb = steiner_symmetral(b, u);
        CHECK(difference_area(sa, sb) <= difference_area(a, b) + 1e-8);
        CHECK(symdiff_area(sa, sb) <= symdiff_area(a, b) + 1e-8);

        const Point p{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const Point pp = dot(p, u.normal()) * u.normal();
        CHECK(second_moment(sa, pp) <= second_moment(a, p) + 1e-8);

        const CompactSet inner = regions_only(intersect(a, b));
        if (!inner.regions.empty()) {
            CHECK(contains(sa, steiner_symmetral(inner, u)));
        }
    }
}

TEST_CASE("convex inputs stay convex and lose perimeter") {
    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
        const CompactSet c = random_convex_polygon(rng, {rng.uniform(-1, 1), rng.uniform(-1, 1)}, 1.0, 12);
        const Direction u = random_direction(rng);
        const CompactSet s = steiner_symmetral(c, u);
        CHECK(is_convex(s, 1e-7));
        CHECK(perimeter(s) <= perimeter(c) + 1e-8);
    }
}

TEST_CASE("simplification keeps area and symmetry") {
    CompactSet k = polygon_ball({0.2, 0.1}, 0.5, 1024);
    for (int m = 1; m <= 40; ++m) {
        const double a0 = area(k);
        k = steiner_symmetral(k, Direction(0.7 * m), SymmetrizeOptions{1e-12, 1e-6});
        CHECK(std::abs(area(k) - a0) <= 1e-12);
    }
    CHECK(k.vertex_count() < 4096);
    CHECK(is_symmetric(k, Direction(0.7 * 40), 1e-10));
}
