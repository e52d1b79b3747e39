#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "steinerlab/clip.hpp"
#include "steinerlab/dynamics.hpp"
#include "steinerlab/io.hpp"
#include "steinerlab/random_sets.hpp"
#include "steinerlab/symmetrize.hpp"

using namespace steinerlab;

namespace {

const PowerLaw kExample{0.5, 0.75, 0};

CompactSet vertical_segment() { return segment_set({0, -0.5}, {0, 0.5}); }

// Endpoints and length of a set that is a single segment or point.
struct SegmentShape {
    double length = 0;
    Point a, b;
};

SegmentShape as_segment(const CompactSet& s) {
    REQUIRE(s.regions.empty());
    std::vector<Point> pts;
    for (const auto& c : s.chains)
        for (const auto& seg : c.segments) {
            pts.push_back(seg.a);
            pts.push_back(seg.b);
        }
    REQUIRE(!pts.empty());
    SegmentShape out{0.0, pts[0], pts[0]};
    for (const Point& p : pts)
        for (const Point& q : pts)
            if (dist(p, q) > out.length) out = {dist(p, q), p, q};
    return out;
}

// Boundary of the polygon ball lies between the inscribed and the outer circle.
void check_in_ball_band(const CompactSet& s, Point c, double r, int n) {
    const double inner = r * std::cos(kPi / n);
    double lo = INFINITY, hi = 0;
    for (const Point& p : all_vertices(s)) {
        lo = std::min(lo, dist(p, c));
        hi = std::max(hi, dist(p, c));
    }
    CHECK(lo >= inner - 1e-9);
    CHECK(hi <= r + 1e-9);
}

}  // namespace

TEST_CASE("storage policy") {
    StoragePolicy p{10, 3};
    CHECK(p.stores(0, 100));
    CHECK(p.stores(10, 100));
    CHECK(!p.stores(11, 100));
    CHECK(!p.stores(97, 100));
    CHECK(p.stores(98, 100));
    CHECK(p.stores(100, 100));
    StoragePolicy every{1, 0};
    for (long m = 0; m <= 20; ++m) CHECK(every.stores(m, 20));
}

TEST_CASE("plain: the ball is a fixed point") {
    const CompactSet ball = polygon_ball({0, 0}, 1.0, 64);
    DynamicsOptions o;
    const Trajectory t = iterate_plain(ball, IID{5}, 30, o);
    REQUIRE(t.steps.size() == 31);
    for (const Step& s : t.steps) {
        CHECK(std::abs(area(s.set) - area(ball)) <= 1e-8 * static_cast<double>(s.m) + 1e-15);
        // inclusion is preserved and the disk is fixed, so every symmetral
        // stays between the inscribed disk and the unit disk
        check_in_ball_band(s.set, {0, 0}, 1.0, 64);
    }
}

TEST_CASE("plain: square then fixed under e2") {
    const CompactSet sq = make_polygon_set({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    const Trajectory t = iterate_plain(sq, Explicit{{Direction(kPi / 2), Direction(kPi / 2), Direction(kPi / 2)}}, 3);
    const CompactSet expected = make_polygon_set({{0, -0.5}, {1, -0.5}, {1, 0.5}, {0, 0.5}});
    for (long m = 1; m <= 3; ++m) {
        CHECK(symdiff_area(t.at(m).set, expected) <= 1e-12);
        const BoundingBox b = bounding_box(t.at(m).set);
        CHECK(b.lo.y == doctest::Approx(-0.5).epsilon(1e-14));
        CHECK(b.hi.y == doctest::Approx(0.5).epsilon(1e-14));
    }
}

TEST_CASE("plain: the segment spins with length gamma_m") {
    const long M = 400;
    const AngleLedger L = ledger(kExample, M);
    DynamicsOptions o;
    o.storage = {50, 0};
    long seen = 0;
    o.observer = [&](long m, Direction u, const CompactSet& s) {
        const SegmentShape seg = as_segment(s);
        const double expected = m == 0 ? 1.0 : L.gamma_partials[static_cast<std::size_t>(m - 1)];
        CHECK(std::abs(seg.length - expected) <= 1e-9);
        if (m > 0) {
            // the segment lies on u_m-perp
            const Point v = seg.b - seg.a;
            CHECK(std::abs(dot(v, u.unit())) <= 1e-12);
            CHECK(std::abs(u.theta() - normalize_angle(L.betas[static_cast<std::size_t>(m - 1)])) <= 1e-12);
        }
        ++seen;
    };
    const Trajectory t = iterate_plain(vertical_segment(), kExample, M, o);
    CHECK(seen == M + 1);
    CHECK(t.steps.size() == 9);
}

TEST_CASE("rotated: segment stays on the y-axis with length gamma_m") {
    const long M = 1000;
    const AngleLedger L = ledger(kExample, M);
    DynamicsOptions o;
    o.storage = {100, 10};
    o.observer = [&](long m, Direction, const CompactSet& s) {
        const SegmentShape seg = as_segment(s);
        const double expected = m == 0 ? 1.0 : L.gamma_partials[static_cast<std::size_t>(m - 1)];
        CHECK(std::abs(seg.length - expected) <= 1e-9);
        CHECK(std::abs(seg.a.x) <= 1e-12);
        CHECK(std::abs(seg.b.x) <= 1e-12);
        CHECK(std::abs(seg.a.y + seg.b.y) <= 1e-12);
    };
    const Trajectory t = iterate_rotated(vertical_segment(), kExample, M, o);
    CHECK(t.warnings.empty());
    const LimitEstimate e = estimate_limit(t, 900, 1.0 / 256);
    CHECK(std::abs(as_segment(e.set).length - L.gamma()) <= 1e-9);
    CHECK(e.error_bound <= 2.0 / 256 + 2.0 / 256);
}

TEST_CASE("rotated: rotation bookkeeping matches the ledger") {
    const long M = 200;
    const AngleLedger L = ledger(kExample, M);
    const Trajectory t = iterate_rotated(polygon_ball({0, 0.2}, 0.3, 32), kExample, M);
    for (const Step& s : t.steps) {
        if (s.m == 0) continue;
        CHECK(std::abs(std::abs(s.rotation_applied) - L.alphas[static_cast<std::size_t>(s.m - 1)]) <= 1e-12);
        CHECK(is_symmetric(s.set, Direction(0.0), 1e-9));
    }
}

TEST_CASE("rotated: the centered ball is fixed") {
    const CompactSet ball = polygon_ball({0, 0}, 1.0, 64);
    const Trajectory t = iterate_rotated(ball, kExample, 50);
    for (const Step& s : t.steps) check_in_ball_band(s.set, {0, 0}, 1.0, 64);
}

TEST_CASE("rotated: the ball center follows the anchor recursion") {
    // The symmetral of B_{r,p} along u is B_{r,p'} with p' the projection of
    // p onto u-perp; after the rotation back to e1 the center is cos(alpha) p.
    const Point q{0, 0.4};
    DynamicsOptions o;
    o.anchors = {q};
    const long M = 60;
    const Trajectory t = iterate_rotated(polygon_ball(q, 0.1, 96), kExample, M, o);
    const auto tr = track_anchors(kExample, M, {q});
    const double g0 = tr[0].p[0].y;  // q / gamma_target
    for (const Step& s : t.steps) {
        const BoundingBox b = bounding_box(s.set);
        const double cy = 0.5 * (b.lo.y + b.hi.y);
        // ball center = q * gamma_m, anchor = q * gamma_m / gamma_target
        CHECK(std::abs(cy - s.anchor_points[0].y * (q.y / g0)) <= 1e-3);
        CHECK(std::abs(0.5 * (b.lo.x + b.hi.x)) <= 1e-12);
    }
}

TEST_CASE("rotated: increments outside (0, pi/2) are rejected") {
    const CompactSet sq = make_polygon_set({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK_THROWS_AS(iterate_rotated(sq, Explicit{{Direction(0.3), Direction(0.3)}}, 2), HypothesisError);
    CHECK_THROWS_AS(iterate_rotated(sq, Explicit{{Direction(kPi / 2)}}, 1), HypothesisError);
    CHECK_THROWS_AS(iterate_rotated(sq, Explicit{{Direction(0.0)}}, 1), HypothesisError);
    // u and -u span the same line: an increment just below pi is fine
    CHECK_NOTHROW(iterate_rotated(sq, Explicit{{Direction(kPi - 0.2)}}, 1));
    const Trajectory t = iterate_rotated(sq, Kronecker{1.0}, 3);
    CHECK(!t.warnings.empty());
}

TEST_CASE("commutation rule") {
    Rng rng(2024);
    for (int i = 0; i < 60; ++i) {
        const CompactSet K = random_compact_set(rng);
        const Direction u = random_direction(rng);
        const double R = rng.uniform(0, kTwoPi);
        const CompactSet lhs = rotate(steiner_symmetral(K, u), R);
        const CompactSet rhs = steiner_symmetral(rotate(K, R), Direction(u.theta() + R));
        CHECK(symdiff_area(lhs, rhs) <= 1e-8);
    }
}

TEST_CASE("contraction on the y-axis") {
    // T x = cos(alpha) x, realized geometrically by one rotated step of a
    // point: the image of (0, x) is (0, x cos alpha).
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const double x = rng.uniform(-3, 3);
        const double alpha = rng.uniform(1e-6, kPi / 2 - 1e-6);
        const CompactSet pt = segment_set({0, x}, {0, x});
        const Trajectory t = iterate_rotated(pt, Explicit{{Direction(alpha)}}, 1);
        const Point tx = as_segment(t.last().set).a;
        CHECK(std::abs(tx.x) <= 1e-12);
        const double T = tx.y;
        CHECK(std::abs(T - std::cos(alpha) * x) <= 1e-12);
        CHECK(std::abs(T - x) <= (1 - std::cos(alpha)) * std::abs(x) + 1e-12);
        CHECK(std::abs(x) + 1e-12 >= std::abs(T));
        CHECK(std::abs(T) + 1e-12 >= std::abs(x) * std::cos(alpha));
    }
}

TEST_CASE("track_anchors examples") {
    const long M = 5000;
    const AngleLedger L = ledger(kExample, M);
    const auto tr = track_anchors(kExample, M, {{0, 1}, {0, 0}});
    const Point pM = tr[0].p.back();
    REQUIRE(L.gamma_tail_bound.has_value());
    CHECK(pM.x == 0.0);
    CHECK(std::abs(pM.y - 1.0) <= *L.gamma_tail_bound / L.gamma_target);
    CHECK(std::abs(pM.y - L.gamma() / L.gamma_target) <= 1e-12);
    for (const Point& p : tr[1].p) CHECK(p == Point{0, 0});
    const auto still = track_anchors(Explicit{{Direction(0.0), Direction(kPi)}}, 2, {{0, 1}});
    for (const Point& p : still[0].p) CHECK(p == Point{0, 1});
}

TEST_CASE("monitor rows") {
    const double h = 1.0 / 128;
    SUBCASE("fixed point gives constant rows") {
        const CompactSet ball = polygon_ball({0, 0}, 0.5, 64);
        const Trajectory t = iterate_plain(ball, IID{1}, 10);
        const MonitorTable m = monitor(t, {0.1, 0.2}, {0.3}, h);
        CHECK(m.monotone());
        for (std::size_t d = 0; d < 2; ++d) {
            const double tol = 6 * h * (boundary_length(ball) + kTwoPi * m.deltas[d]);
            for (std::size_t s = 0; s < m.steps.size(); ++s) {
                CHECK(std::abs(m.value(s, d, 0, 0) - m.value(0, d, 0, 0)) <= tol);
            }
        }
    }
    SUBCASE("rotated segment is nonincreasing") {
        DynamicsOptions o;
        o.storage = {20, 0};
        const Trajectory t = iterate_rotated(vertical_segment(), kExample, 400, o);
        const MonitorTable m = monitor(t, {0.2}, {0.1}, h);
        CHECK(m.monotone());
        // oracle: (K_m)_delta is a stadium of length gamma_m and radius delta;
        // the ball B_{0.1} at the origin lies inside it
        const AngleLedger L = ledger(kExample, 400);
        for (std::size_t s = 0; s < m.steps.size(); ++s) {
            const long k = m.steps[s];
            const double len = k == 0 ? 1.0 : L.gamma_partials[static_cast<std::size_t>(k - 1)];
            const double exact = 2 * 0.2 * len + kPi * 0.04 - kPi * 0.01;
            CHECK(std::abs(m.value(s, 0, 0, 0) - exact) <= 6 * h * (2 * len + kTwoPi * 0.2));
        }
    }
    SUBCASE("a huge ball swallows everything") {
        const Trajectory t = iterate_plain(make_polygon_set({{0, 0}, {1, 0}, {1, 1}}), Kronecker{1.0}, 5);
        const MonitorTable m = monitor(t, {0.1}, {10.0}, h);
        for (double v : m.values) CHECK(v == 0.0);
    }
}

TEST_CASE("cauchy diagnostics of a fixed point") {
    const CompactSet ball = polygon_ball({0, 0}, 0.5, 64);
    const Trajectory t = iterate_plain(ball, IID{2}, 8);
    const double h = 1.0 / 128;
    const auto rows = cauchy_diagnostics(t, {1, 3}, h);
    CHECK(rows.size() == 8 + 6);
    for (const auto& r : rows) {
        CHECK(r.hausdorff <= 2 * h);
        CHECK(r.symdiff <= 2 * area(ball) * (1 - std::cos(kPi / 64)) * 4);
    }
}

TEST_CASE("area invariant violation is detected") {
    const CompactSet sq = make_polygon_set({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    DynamicsOptions o;
    o.area_fault_step = 3;
    CHECK_THROWS_AS(iterate_plain(sq, Kronecker{1.0}, 10, o), InvariantViolation);
    CHECK_THROWS_AS(iterate_rotated(sq, kExample, 10, o), InvariantViolation);
    o.area_fault_step = 0;
    CHECK_NOTHROW(iterate_plain(sq, Kronecker{1.0}, 10, o));
}

TEST_CASE("checkpoints and csv") {
    const auto dir = std::filesystem::temp_directory_path() / "steinerlab_dyn_test";
    std::filesystem::remove_all(dir);
    DynamicsOptions o;
    o.storage = {5, 2};
    const CompactSet sq = make_polygon_set({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    const Trajectory t = iterate_plain(sq, Kronecker{1.0}, 12, o);
    write_checkpoints(t, dir.string());
    const auto manifest = read_json((dir / "manifest.json").string());
    CHECK(manifest["M"] == 12);
    CHECK(manifest["mode"] == "plain");
    CHECK(manifest["steps"].size() == t.steps.size());
    for (const Step& s : t.steps) {
        const CompactSet back = load_set((dir / ("step_" + std::to_string(s.m) + ".json")).string());
        CHECK(area(back) == area(s.set));
    }
    const MonitorTable m = monitor(t, {0.1}, {0.2}, 1.0 / 64);
    write_monitor_csv(m, (dir / "monitor.csv").string());
    std::ifstream in(dir / "monitor.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "m,delta,r,anchor,value");
}

TEST_CASE("trajectories are deterministic") {
    Rng rng(6);
    const CompactSet K = random_compact_set(rng);
    const Trajectory a = iterate_plain(K, IID{9}, 20);
    const Trajectory b = iterate_plain(K, IID{9}, 20);
    CHECK(to_json(a.last().set).dump() == to_json(b.last().set).dump());
}
