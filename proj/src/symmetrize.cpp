#include "steinerlab/symmetrize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "steinerlab/clip.hpp"

namespace steinerlab {

namespace {

// Orthonormal frame with t along u_perp and s along u; right-handed, so ring
// orientation survives the change of coordinates.
struct Frame {
    Point w;
    Point u;

    explicit Frame(Direction d) : w(d.normal()), u(d.unit()) {}
    Point to_frame(Point p) const { return {dot(p, w), dot(p, u)}; }
    Point from_frame(double t, double s) const { return t * w + s * u; }
};

struct SlabEdge {
    double s_left;
    double s_right;
    int winding;  // +1 for lower boundaries, -1 for upper boundaries
};

struct Interval {
    double lo;
    double hi;
};

double union_measure(std::vector<Interval>& iv) {
    if (iv.empty()) return 0.0;
    std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    double total = 0.0;
    double lo = iv[0].lo, hi = iv[0].hi;
    for (std::size_t i = 1; i < iv.size(); ++i) {
        if (iv[i].lo > hi) {
            total += hi - lo;
            lo = iv[i].lo;
            hi = iv[i].hi;
        } else {
            hi = std::max(hi, iv[i].hi);
        }
    }
    return total + (hi - lo);
}

std::vector<Interval> merge_intervals(std::vector<Interval> iv) {
    std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (const auto& i : iv) {
        if (!out.empty() && i.lo <= out.back().hi) {
            out.back().hi = std::max(out.back().hi, i.hi);
        } else {
            out.push_back(i);
        }
    }
    return out;
}

// Everything the symmetral needs, computed once in the frame of u.
struct Profile {
    std::vector<double> t;
    std::vector<double> below;    // m(t_i-)
    std::vector<double> above;    // m(t_i+)
    std::vector<double> section;  // closed cross-section measure
    std::vector<Interval> marks;  // null-set support outside closure{m > 0}
    std::vector<bool> slab_positive;
    double zero_tol = 0.0;
};

Profile build_profile(const CompactSet& set, const Frame& fr, double merge_eps) {
    Profile pr;

    // Frame coordinates of every ring, kept alongside for edge processing.
    std::vector<std::vector<Point>> rings;
    double smax = 0.0;
    for (const auto& r : set.regions) {
        auto push = [&](const Ring& ring) {
            std::vector<Point> v;
            v.reserve(ring.size());
            for (const Point& p : ring.vertices) {
                v.push_back(fr.to_frame(p));
                smax = std::max(smax, std::abs(v.back().y));
            }
            rings.push_back(std::move(v));
        };
        push(r.outer);
        for (const auto& h : r.holes) push(h);
    }
    std::vector<Segment> chain_segs;
    for (const auto& c : set.chains) {
        for (const auto& s : c.segments) chain_segs.push_back({fr.to_frame(s.a), fr.to_frame(s.b)});
    }

    std::vector<double> ts;
    for (const auto& v : rings) {
        for (const Point& p : v) ts.push_back(p.x);
    }
    for (const auto& s : chain_segs) {
        ts.push_back(s.a.x);
        ts.push_back(s.b.x);
    }
    std::sort(ts.begin(), ts.end());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (i == 0 || ts[i] - ts[i - 1] > merge_eps) pr.t.push_back(ts[i]);
    }
    const std::size_t nb = pr.t.size();
    pr.below.assign(nb, 0.0);
    pr.above.assign(nb, 0.0);
    pr.section.assign(nb, 0.0);
    if (nb == 0) return pr;
    const std::size_t ns = nb - 1;
    pr.slab_positive.assign(ns, false);
    pr.zero_tol = 1e-14 * std::max(1.0, smax);

    auto snap = [&](double t) {
        auto it = std::upper_bound(pr.t.begin(), pr.t.end(), t);
        return it == pr.t.begin() ? std::size_t{0} : static_cast<std::size_t>(it - pr.t.begin() - 1);
    };

    // Bucket ring edges into the slabs they span (CSR layout).
    struct EdgeSpan {
        std::size_t i0, i1;  // slab range [i0, i1)
        double ta, sa, tb, sb;
        int winding;
    };
    std::vector<EdgeSpan> spans;
    std::vector<std::size_t> count(ns + 1, 0);
    for (const auto& v : rings) {
        const std::size_t n = v.size();
        for (std::size_t k = 0; k < n; ++k) {
            const Point a = v[k], b = v[(k + 1) % n];
            const std::size_t ia = snap(a.x), ib = snap(b.x);
            if (ia == ib) continue;
            EdgeSpan e{std::min(ia, ib), std::max(ia, ib), pr.t[ia], a.y, pr.t[ib], b.y, ib > ia ? +1 : -1};
            for (std::size_t s = e.i0; s < e.i1; ++s) ++count[s + 1];
            spans.push_back(e);
        }
    }
    for (std::size_t s = 0; s < ns; ++s) count[s + 1] += count[s];
    std::vector<SlabEdge> slab_edges(count[ns]);
    {
        std::vector<std::size_t> fill(count.begin(), count.end() - 1);
        for (const auto& e : spans) {
            const double inv = 1.0 / (e.tb - e.ta);
            // Endpoints are reproduced exactly so touching edges meet exactly.
            auto eval = [&](double t) {
                if (t == e.ta) return e.sa;
                if (t == e.tb) return e.sb;
                return e.sa + (e.sb - e.sa) * (t - e.ta) * inv;
            };
            for (std::size_t s = e.i0; s < e.i1; ++s) {
                slab_edges[fill[s]++] = {eval(pr.t[s]), eval(pr.t[s + 1]), e.winding};
            }
        }
    }

    // Chain contributions: vertical pieces land on a single breakpoint,
    // the rest project to support intervals.
    std::vector<std::vector<Interval>> vertical(nb);
    std::vector<Interval> support;
    for (const auto& s : chain_segs) {
        const std::size_t ia = snap(s.a.x), ib = snap(s.b.x);
        if (ia == ib) {
            vertical[ia].push_back({std::min(s.a.y, s.b.y), std::max(s.a.y, s.b.y)});
            support.push_back({pr.t[ia], pr.t[ia]});
        } else {
            support.push_back({pr.t[std::min(ia, ib)], pr.t[std::max(ia, ib)]});
        }
    }

    // Sweep slabs: intervals by winding, limits, and closed sections.
    std::vector<Interval> prev_right;  // intervals at the right end of the previous slab
    std::vector<SlabEdge> es;
    std::vector<Interval> cur_left, cur_right, sect;
    for (std::size_t b = 0; b < nb; ++b) {
        cur_left.clear();
        cur_right.clear();
        if (b < ns) {
            es.assign(slab_edges.begin() + static_cast<std::ptrdiff_t>(count[b]),
                      slab_edges.begin() + static_cast<std::ptrdiff_t>(count[b + 1]));
            std::sort(es.begin(), es.end(), [](const SlabEdge& x, const SlabEdge& y) {
                const double mx = x.s_left + x.s_right, my = y.s_left + y.s_right;
                if (mx != my) return mx < my;
                return x.winding < y.winding;  // close before open at shared boundaries
            });
            int wind = 0;
            double open_l = 0.0, open_r = 0.0;
            for (const auto& e : es) {
                const int prev = wind;
                wind += e.winding;
                if (prev <= 0 && wind > 0) {
                    open_l = e.s_left;
                    open_r = e.s_right;
                } else if (prev > 0 && wind <= 0) {
                    cur_left.push_back({open_l, std::max(open_l, e.s_left)});
                    cur_right.push_back({open_r, std::max(open_r, e.s_right)});
                }
            }
            double ml = 0.0, mr = 0.0;
            for (const auto& i : cur_left) ml += i.hi - i.lo;
            for (const auto& i : cur_right) mr += i.hi - i.lo;
            pr.above[b] = ml;
            pr.below[b + 1] = mr;
            pr.slab_positive[b] = std::max(ml, mr) > pr.zero_tol;
        }
        sect = prev_right;
        sect.insert(sect.end(), cur_left.begin(), cur_left.end());
        sect.insert(sect.end(), vertical[b].begin(), vertical[b].end());
        pr.section[b] = union_measure(sect);
        prev_right = cur_right;
    }

    // Support marks: chain projections minus the closed positive set.
    std::vector<Interval> covered;
    for (std::size_t s = 0; s < ns; ++s) {
        if (pr.slab_positive[s]) covered.push_back({pr.t[s], pr.t[s + 1]});
    }
    for (std::size_t b = 0; b < nb; ++b) {
        if (pr.section[b] > std::max(pr.below[b], pr.above[b]) + pr.zero_tol) covered.push_back({pr.t[b], pr.t[b]});
    }
    covered = merge_intervals(std::move(covered));
    for (const auto& p : merge_intervals(std::move(support))) {
        double cur = p.lo;
        bool cur_covered = false;  // whether cur sits on a covered point
        for (const auto& c : covered) {
            if (c.hi < cur) continue;
            if (c.lo > p.hi) break;
            if (c.lo > cur) pr.marks.push_back({cur, c.lo});
            if (c.lo <= cur) cur_covered = true;
            cur = std::max(cur, c.hi);
            cur_covered = true;
        }
        if (cur < p.hi) {
            pr.marks.push_back({cur, p.hi});
        } else if (p.lo == p.hi && !cur_covered) {
            pr.marks.push_back({p.lo, p.lo});
        }
    }
    return pr;
}

struct ProfilePoint {
    double t;
    double m;
};

// Greedy sleeve simplification of a strictly t-increasing polyline: every
// dropped point stays within tol (vertically) of the kept polyline.
void simplify_piece(const std::vector<ProfilePoint>& in, std::size_t first, std::size_t last, double tol,
                    std::vector<ProfilePoint>& out) {
    out.push_back(in[first]);
    if (last == first) return;
    std::size_t anchor = first;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    std::size_t k = anchor + 1;
    while (k <= last) {
        const double dt = in[k].t - in[anchor].t;
        const double slope = (in[k].m - in[anchor].m) / dt;
        if (slope >= lo && slope <= hi) {
            lo = std::max(lo, (in[k].m - tol - in[anchor].m) / dt);
            hi = std::min(hi, (in[k].m + tol - in[anchor].m) / dt);
            ++k;
        } else {
            anchor = k - 1;
            out.push_back(in[anchor]);
            lo = -std::numeric_limits<double>::infinity();
            hi = std::numeric_limits<double>::infinity();
        }
    }
    if (!(out.back().t == in[last].t && out.back().m == in[last].m)) out.push_back(in[last]);
}

std::vector<ProfilePoint> simplify_run(const std::vector<ProfilePoint>& run, double tol) {
    std::vector<ProfilePoint> out;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= run.size(); ++i) {
        if (i == run.size() || run[i].t == run[i - 1].t) {
            simplify_piece(run, start, i - 1, tol, out);
            start = i;
        }
    }
    return out;
}

double run_integral(const std::vector<ProfilePoint>& run) {
    double s = 0.0;
    for (std::size_t i = 1; i < run.size(); ++i) s += 0.5 * (run[i].m + run[i - 1].m) * (run[i].t - run[i - 1].t);
    return s;
}

}  // namespace

double ChordFunction::operator()(double t) const {
    if (breakpoints.empty()) return 0.0;
    if (t < breakpoints.front() - merge_eps || t > breakpoints.back() + merge_eps) return 0.0;
    auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), t);
    std::size_t i = static_cast<std::size_t>(it - breakpoints.begin());
    // Coordinates within merge_eps of a breakpoint evaluate the closed section.
    if (i < breakpoints.size() && breakpoints[i] - t <= merge_eps) return section[i];
    if (i > 0 && t - breakpoints[i - 1] <= merge_eps) return section[i - 1];
    const double t0 = breakpoints[i - 1], t1 = breakpoints[i];
    const double f = (t - t0) / (t1 - t0);
    return limit_above[i - 1] + f * (limit_below[i] - limit_above[i - 1]);
}

double ChordFunction::integral() const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        s += 0.5 * (limit_above[i] + limit_below[i + 1]) * (breakpoints[i + 1] - breakpoints[i]);
    }
    return s;
}

ChordFunction chord_function(const CompactSet& set, Direction u, const SymmetrizeOptions& opts) {
    const Frame fr(u);
    Profile pr = build_profile(set, fr, opts.breakpoint_merge);
    ChordFunction cf;
    cf.u = u;
    cf.merge_eps = opts.breakpoint_merge;
    cf.breakpoints = std::move(pr.t);
    cf.limit_below = std::move(pr.below);
    cf.limit_above = std::move(pr.above);
    cf.section = std::move(pr.section);
    for (const auto& m : pr.marks) cf.support_marks.emplace_back(m.lo, m.hi);
    return cf;
}

CompactSet steiner_symmetral(const CompactSet& set, Direction u, const SymmetrizeOptions& opts) {
    const Frame fr(u);
    const Profile pr = build_profile(set, fr, opts.breakpoint_merge);
    CompactSet out;
    const std::size_t nb = pr.t.size();
    if (nb == 0) return out;

    // Runs of positive slabs, split at pinch points where both limits vanish.
    std::vector<std::vector<ProfilePoint>> runs;
    double exact_integral = 0.0;
    for (std::size_t s = 0; s + 1 < nb; ++s) {
        if (!pr.slab_positive[s]) continue;
        exact_integral += 0.5 * (pr.above[s] + pr.below[s + 1]) * (pr.t[s + 1] - pr.t[s]);
        const bool continues = s > 0 && pr.slab_positive[s - 1] &&
                               !(pr.below[s] <= pr.zero_tol && pr.above[s] <= pr.zero_tol);
        if (!continues) runs.emplace_back();
        auto& run = runs.back();
        const ProfilePoint left{pr.t[s], pr.above[s]};
        // Jumps below zero_tol are rounding noise, not vertical edges.
        if (run.empty() || std::abs(run.back().m - left.m) > pr.zero_tol) run.push_back(left);
        run.push_back({pr.t[s + 1], pr.below[s + 1]});
    }

    // Collinear merging (and optional simplification), then an area-exact
    // rescale of the whole profile.
    double scale_m = 1.0;
    {
        double simplified_integral = 0.0;
        for (auto& run : runs) {
            double mmax = 0.0;
            for (const auto& p : run) mmax = std::max(mmax, p.m);
            const double tol = std::max(2.0 * opts.simplify_tol, 1e-15 * mmax);
            run = simplify_run(run, tol);
            simplified_integral += run_integral(run);
        }
        if (simplified_integral > 0.0) scale_m = exact_integral / simplified_integral;
    }

    for (const auto& run : runs) {
        std::vector<Point> ring;
        ring.reserve(2 * run.size());
        auto push = [&](Point p) {
            if (ring.empty() || !(ring.back() == p)) ring.push_back(p);
        };
        for (const auto& p : run) push(fr.from_frame(p.t, -0.5 * scale_m * p.m));
        for (auto it = run.rbegin(); it != run.rend(); ++it) push(fr.from_frame(it->t, 0.5 * scale_m * it->m));
        while (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
        if (ring.size() < 3) continue;
        out.regions.push_back(Region{Ring{std::move(ring)}, {}});
    }

    Chain axis;
    for (std::size_t b = 0; b < nb; ++b) {
        if (pr.section[b] > std::max(pr.below[b], pr.above[b]) + pr.zero_tol) {
            const double h = 0.5 * pr.section[b];
            axis.segments.push_back({fr.from_frame(pr.t[b], -h), fr.from_frame(pr.t[b], h)});
        }
    }
    for (const auto& m : pr.marks) axis.segments.push_back({fr.from_frame(m.lo, 0.0), fr.from_frame(m.hi, 0.0)});
    if (!axis.segments.empty()) out.chains.push_back(std::move(axis));
    return out;
}

namespace {

// Cyclic vertex-by-vertex match of ring b against ring a in either direction.
bool rings_match(const Ring& a, const Ring& b, double tol) {
    const std::size_t n = a.size();
    if (b.size() != n || n == 0) return false;
    for (std::size_t k = 0; k < n; ++k) {
        if (dist(a.vertices[k], b.vertices[0]) > tol) continue;
        for (int dir : {1, -1}) {
            bool ok = true;
            for (std::size_t i = 1; i < n && ok; ++i) {
                const std::size_t j = dir > 0 ? (k + i) % n : (k + n - i % n) % n;
                ok = dist(a.vertices[j], b.vertices[i]) <= tol;
            }
            if (ok) return true;
        }
    }
    return false;
}

// Every mirrored ring coincides with an original ring up to vertex moves of
// tol; the symmetric difference is then at most 2 * tol * total perimeter
// plus O(tol^2) per vertex.
bool mirror_matches(const CompactSet& set, const CompactSet& mirrored, double tol) {
    if (set.regions.size() != mirrored.regions.size()) return false;
    std::vector<const Ring*> pool;
    for (const auto& r : set.regions) {
        pool.push_back(&r.outer);
        for (const auto& h : r.holes) pool.push_back(&h);
    }
    std::vector<bool> used(pool.size(), false);
    auto claim = [&](const Ring& ring) {
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (!used[i] && rings_match(*pool[i], ring, tol)) {
                used[i] = true;
                return true;
            }
        }
        return false;
    };
    for (const auto& r : mirrored.regions) {
        if (!claim(r.outer)) return false;
        for (const auto& h : r.holes)
            if (!claim(h)) return false;
    }
    return true;
}

}  // namespace

bool is_symmetric(const CompactSet& set, Direction u, double tol) {
    const CompactSet mirrored = reflect(set, u);
    const double vertex_tol = tol / (4.0 * std::max(1.0, perimeter(set)) + 4.0 * static_cast<double>(set.vertex_count()));
    const bool fast = mirror_matches(set, mirrored, vertex_tol);
    if (!set.regions.empty() && !fast && symdiff_area(set, mirrored) > tol) return false;
    for (const auto& c : mirrored.chains) {
        for (const auto& s : c.segments) {
            if (!segment_covered(s, set, tol)) return false;
        }
    }
    return true;
}

}  // namespace steinerlab
